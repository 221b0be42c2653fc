#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "galign/alignment.hpp"
#include "galign/analysis.hpp"
#include "galign/event_log.hpp"

namespace galign {

// Two lines, "student: [1a, 1b, -]" and "normative: [...]", each ending in
// '\n', preceded by `label` on its own line when non-empty.
std::string render_alignment_text(const AlignedPair& pair, std::string_view label = {});

struct ParsedAlignment {
  std::string label;
  AlignedPair pair;  // score left at 0; identity/matches recomputed
};

// Inverse of render_alignment_text for one or more concatenated blocks.
// Throws Error(MalformedDocument).
std::vector<ParsedAlignment> parse_alignment_text(std::string_view text);

enum class ChartKind { IdentityDumbbell, DurationDumbbell, IdentityVsDuration };

std::string_view to_string(ChartKind kind);

struct ChartSpec {
  ChartKind kind = ChartKind::IdentityDumbbell;
  int stage = 0;  // 0 = whole process
  std::string path;
};

// Whole process plus every stage for each of the three chart kinds, written
// to `<dir>/<kind>_<whole|stage_N>.svg`.
std::vector<ChartSpec> default_chart_specs(int stage_count, const std::string& dir);

// Standalone SVG. Dumbbells draw one pre -> post arrow per subject, dark for
// an improvement and light for a decline; they throw Error(MissingRound)
// unless every subject has both rounds. The scatter plots identity (y, 0-100)
// against duration (x), pre in gray and post in black.
std::string render_chart(const std::vector<CaseResult>& results, const ChartSpec& spec);

// Writes one file per spec; returns the paths written.
std::vector<std::string> emit_charts(const std::vector<CaseResult>& results,
                                     const std::vector<ChartSpec>& specs);

// Stage id -> CSS color.
using Palette = std::map<int, std::string>;

// S1 purple, S2 blue, S3 green, S4 orange, S5 red, S6 yellow.
Palette default_palette();
// JSON object {"1": "#800080", ...}
Palette parse_palette(std::string_view document);
// Reads GUIDELINE_ALIGN_PALETTE when set, otherwise default_palette().
Palette palette_from_environment();

// Aligned rows as colored cells, one color per stage of the abbreviation.
std::string render_alignment_svg(const AlignedPair& pair, std::string_view label,
                                 const StageMap& map, const Palette& palette);

}  // namespace galign
