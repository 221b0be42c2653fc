// galign: simulate a guideline Petri net, align recorded traces against the
// simulated normative log and render reports.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "galign/alignment.hpp"
#include "galign/analysis.hpp"
#include "galign/error.hpp"
#include "galign/event_log.hpp"
#include "galign/petri_net.hpp"
#include "galign/report.hpp"
#include "galign/simulator.hpp"

namespace {

constexpr const char* kFormats = R"(File formats:
  net          PNML (place/transition/arc, one initialMarking token) or JSON
               {"places":[..],"transitions":[{"id","label","visible"}],
                "arcs":[[src,dst]],"initial":"p","final":"q"}
  event log    CSV header case_id,resource,round,activity,start,end
               (ISO 8601 timestamps, round = pre|post)
  stage map    CSV header activity,stage,abbreviation[,stage_name]
  resources    CSV header resource,student
  columns      CSV header column,header (renames log columns)
)";

struct SimulateArgs {
  std::string net;
  std::string out;
  std::size_t runs = 1000;
  std::size_t max_len = 65;
  std::uint64_t seed = 0;
  std::string final_activity = "Check catheter position";
  bool keep_invisible = false;
  bool keep_duplicates = false;
  bool serial = false;
};

struct AlignArgs {
  std::string log;
  std::string norm;
  std::string stages;
  std::string resources;
  std::string columns;
  std::string out;
  std::string text;
  std::string summary;
  galign::ScoreParams params;
};

struct ReportArgs {
  std::string in;
  std::string out_dir;
  std::string stages;
};

int run_simulate(const SimulateArgs& a) {
  const galign::PetriNet net = galign::load_net_file(a.net);
  galign::SimConfig cfg;
  cfg.n_runs = a.runs;
  cfg.max_activities = a.max_len;
  cfg.seed = a.seed;
  cfg.final_activity = a.final_activity;
  cfg.drop_invisible = !a.keep_invisible;
  cfg.deduplicate = !a.keep_duplicates;
  const galign::SimResult result =
      a.serial ? galign::simulate_log_serial(net, cfg) : galign::simulate_log(net, cfg);
  galign::write_text_file(a.out, galign::write_log_csv(result.kept));
  const auto& s = result.stats;
  std::cerr << "runs=" << cfg.n_runs << " completed=" << s.completed
            << " truncated=" << s.discarded_truncated << " deadlocked=" << s.discarded_deadlocked
            << " wrong_final=" << s.discarded_final_mismatch
            << " duplicates=" << s.duplicates_removed << " kept=" << result.kept.n_seq() << "\n";
  return 0;
}

int run_align(const AlignArgs& a) {
  galign::LogCsvOptions options;
  if (!a.resources.empty()) {
    options.resource_to_student = galign::load_resource_map(galign::read_text_file(a.resources));
  }
  if (!a.columns.empty()) options.columns = galign::load_column_map(galign::read_text_file(a.columns));
  const galign::EventLog student = galign::load_log_csv(galign::read_text_file(a.log), options);
  const galign::EventLog norm = galign::load_log_csv(galign::read_text_file(a.norm));
  const galign::StageMap map = galign::load_stage_map(galign::read_text_file(a.stages));

  const auto results = galign::conformance_report(student, norm, map, a.params);
  const auto stats = galign::summarize(results);
  galign::write_text_file(a.out, galign::report_to_json(results, stats, map, a.params));
  if (!a.summary.empty()) galign::write_text_file(a.summary, galign::summary_csv(stats));
  if (!a.text.empty()) {
    std::string text;
    for (const auto& r : results) text += galign::render_alignment_text(r.whole_best.aligned, r.case_id) + "\n";
    galign::write_text_file(a.text, text);
  }
  for (const auto& r : results) {
    std::cerr << r.case_id << ": identity " << r.whole_identity << "%\n";
  }
  return 0;
}

int run_report(const ReportArgs& a) {
  const auto results = galign::report_from_json(galign::read_text_file(a.in));
  if (results.empty()) throw galign::Error(galign::ErrorCode::EmptyLog, a.in, "report has no cases");
  std::filesystem::create_directories(a.out_dir);
  const auto stats = galign::summarize(results);
  const int stages = stats.stage_count;

  bool both_rounds = stats.missing_round.empty() && !stats.improvements.empty();
  std::vector<galign::ChartSpec> specs;
  for (auto& spec : galign::default_chart_specs(stages, a.out_dir)) {
    if (spec.kind != galign::ChartKind::IdentityVsDuration && !both_rounds) continue;
    specs.push_back(spec);
  }
  const auto written = galign::emit_charts(results, specs);

  std::string text;
  for (const auto& r : results) text += galign::render_alignment_text(r.whole_best.aligned, r.case_id) + "\n";
  const auto dir = std::filesystem::path(a.out_dir);
  galign::write_text_file((dir / "alignments.txt").string(), text);
  galign::write_text_file((dir / "summary.csv").string(), galign::summary_csv(stats));

  if (!a.stages.empty()) {
    const galign::StageMap map = galign::load_stage_map(galign::read_text_file(a.stages));
    const galign::Palette palette = galign::palette_from_environment();
    for (const auto& r : results) {
      const std::string name = "alignment_" + r.case_id + ".svg";
      galign::write_text_file((dir / name).string(),
                              galign::render_alignment_svg(r.whole_best.aligned, r.case_id, map, palette));
    }
  }
  if (!both_rounds) {
    std::cerr << "dumbbell charts skipped: not every student has both rounds\n";
  }
  std::cerr << "wrote " << written.size() << " charts to " << a.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformance checking by Petri-net simulation and global sequence alignment"};
  app.footer(kFormats);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a Petri net into a normative event log");
  simulate->add_option("--net", sim.net, "Petri net (PNML or JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--runs", sim.runs, "Number of simulated runs")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--max-len", sim.max_len, "Maximum recorded activities per run")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Random seed")->required();
  simulate->add_option("--final", sim.final_activity, "Required final activity (empty disables)")->capture_default_str();
  simulate->add_flag("--keep-invisible", sim.keep_invisible, "Keep invisible transition labels");
  simulate->add_flag("--keep-duplicates", sim.keep_duplicates, "Do not deduplicate sequences");
  simulate->add_flag("--serial", sim.serial, "Use the serial reference kernel");
  simulate->add_option("-o,--out", sim.out, "Output event-log CSV")->required();

  AlignArgs al;
  auto* align = app.add_subcommand("align", "Align recorded traces against a normative log");
  align->add_option("--log", al.log, "Recorded event log CSV")->required()->check(CLI::ExistingFile);
  align->add_option("--norm", al.norm, "Normative event log CSV")->required()->check(CLI::ExistingFile);
  align->add_option("--stages", al.stages, "Stage map CSV")->required()->check(CLI::ExistingFile);
  align->add_option("--resources", al.resources, "Resource-to-student CSV")->check(CLI::ExistingFile);
  align->add_option("--columns", al.columns, "Log column renaming CSV")->check(CLI::ExistingFile);
  align->add_option("--match", al.params.match, "Match score")->capture_default_str();
  align->add_option("--gap", al.params.gap, "Gap score")->capture_default_str();
  align->add_option("--mismatch", al.params.mismatch, "Mismatch score")->capture_default_str();
  align->add_option("-o,--out", al.out, "Report JSON")->required();
  align->add_option("--text", al.text, "Also write aligned pairs as text");
  align->add_option("--summary", al.summary, "Also write the summary CSV");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Render charts and tables from a report JSON");
  report->add_option("--in", rep.in, "Report JSON written by 'align'")->required()->check(CLI::ExistingFile);
  report->add_option("--out-dir", rep.out_dir, "Output directory")->required();
  report->add_option("--stages", rep.stages, "Stage map CSV for colored alignment SVGs")->check(CLI::ExistingFile);

  if (argc <= 1) {
    std::cerr << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*align) return run_align(al);
    if (*report) return run_report(rep);
  } catch (const galign::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
