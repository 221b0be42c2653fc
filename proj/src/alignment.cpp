#include "galign/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "galign/error.hpp"

namespace galign {

void ScoreParams::validate() const {
  if (!(match > 0)) throw Error(ErrorCode::InvalidArgument, "match", "must be > 0");
  if (!(gap < 0)) throw Error(ErrorCode::InvalidArgument, "gap", "must be < 0");
  if (!(mismatch < 0)) throw Error(ErrorCode::InvalidArgument, "mismatch", "must be < 0");
}

double score_pair(std::string_view a, std::string_view b, const ScoreParams& p) {
  const bool ga = a == kGap;
  const bool gb = b == kGap;
  if (ga && gb) throw Error(ErrorCode::BothGaps, "-");
  if (ga || gb) return p.gap;
  return a == b ? p.match : p.mismatch;
}

namespace {

using Code = std::uint32_t;

// Symbol -> dense code, shared by every sequence of one alignment job.
class Interner {
 public:
  std::vector<Code> encode(std::span<const std::string> s) {
    std::vector<Code> out;
    out.reserve(s.size());
    for (const auto& sym : s) {
      if (sym == kGap) throw Error(ErrorCode::ReservedSymbol, sym, "gap symbol in input sequence");
      auto [it, _] = codes_.emplace(sym, static_cast<Code>(codes_.size()));
      out.push_back(it->second);
    }
    return out;
  }

 private:
  std::unordered_map<std::string, Code> codes_;
};

// Fills F and T for codes a (rows) and b (columns).
void fill(std::span<const Code> a, std::span<const Code> b, const ScoreParams& p,
          DPMatrices& dp) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  dp.rows = n + 1;
  dp.cols = m + 1;
  dp.score.assign(dp.rows * dp.cols, 0.0);
  dp.trace.assign(dp.rows * dp.cols, Step::None);
  for (std::size_t i = 1; i <= n; ++i) {
    dp.score[i * dp.cols] = static_cast<double>(i) * p.gap;
    dp.trace[i * dp.cols] = Step::Up;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    dp.score[j] = static_cast<double>(j) * p.gap;
    dp.trace[j] = Step::Left;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double* prev = &dp.score[(i - 1) * dp.cols];
    double* cur = &dp.score[i * dp.cols];
    Step* tr = &dp.trace[i * dp.cols];
    const Code ai = a[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = prev[j - 1] + (ai == b[j - 1] ? p.match : p.mismatch);
      const double up = prev[j] + p.gap;
      const double left = cur[j - 1] + p.gap;
      if (diag >= up && diag >= left) {
        cur[j] = diag;
        tr[j] = Step::Diagonal;
      } else if (up >= left) {
        cur[j] = up;
        tr[j] = Step::Up;
      } else {
        cur[j] = left;
        tr[j] = Step::Left;
      }
    }
  }
}

// Walks T from (n, m) back to (0, 0); returns steps front-to-back.
std::vector<Step> traceback(const DPMatrices& dp) {
  std::vector<Step> path;
  std::size_t i = dp.rows - 1;
  std::size_t j = dp.cols - 1;
  path.reserve(i + j);
  while (i > 0 || j > 0) {
    const Step s = dp.T(i, j);
    path.push_back(s);
    switch (s) {
      case Step::Diagonal: --i; --j; break;
      case Step::Up: --i; break;
      case Step::Left: --j; break;
      case Step::None: return {};  // unreachable for a filled matrix
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct PathSummary {
  std::size_t length = 0;
  std::size_t matches = 0;
};

PathSummary summarize_path(const std::vector<Step>& path, std::span<const Code> a,
                           std::span<const Code> b) {
  PathSummary s;
  s.length = path.size();
  std::size_t i = 0, j = 0;
  for (Step step : path) {
    if (step == Step::Diagonal) {
      if (a[i] == b[j]) ++s.matches;
      ++i;
      ++j;
    } else if (step == Step::Up) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double percent(std::size_t matches, std::size_t length) {
  return length == 0 ? 0.0 : (100.0 * static_cast<double>(matches)) / static_cast<double>(length);
}

AlignedPair materialize(const std::vector<Step>& path, std::span<const std::string> s1,
                        std::span<const std::string> s2, double score) {
  AlignedPair out;
  out.score = score;
  out.s1.reserve(path.size());
  out.s2.reserve(path.size());
  std::size_t i = 0, j = 0;
  for (Step step : path) {
    if (step == Step::Diagonal) {
      out.s1.push_back(s1[i++]);
      out.s2.push_back(s2[j++]);
    } else if (step == Step::Up) {
      out.s1.push_back(s1[i++]);
      out.s2.emplace_back(kGap);
    } else {
      out.s1.emplace_back(kGap);
      out.s2.push_back(s2[j++]);
    }
  }
  out.matches = count_matches(out.s1, out.s2);
  out.identity = percent(out.matches, out.s1.size());
  return out;
}

}  // namespace

AlignedPair align(std::span<const std::string> s1, std::span<const std::string> s2,
                  const ScoreParams& p, DPMatrices& matrices) {
  p.validate();
  Interner interner;
  const auto a = interner.encode(s1);
  const auto b = interner.encode(s2);
  fill(a, b, p, matrices);
  return materialize(traceback(matrices), s1, s2, matrices.F(a.size(), b.size()));
}

AlignedPair align(std::span<const std::string> s1, std::span<const std::string> s2,
                  const ScoreParams& p) {
  DPMatrices scratch;
  return align(s1, s2, p, scratch);
}

Sequence chars(std::string_view text) {
  Sequence out;
  out.reserve(text.size());
  for (char c : text) out.emplace_back(1, c);
  return out;
}

std::size_t count_matches(std::span<const std::string> s1, std::span<const std::string> s2) {
  const std::size_t n = std::min(s1.size(), s2.size());
  std::size_t matches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s1[i] != kGap && s1[i] == s2[i]) ++matches;
  }
  return matches;
}

double identity(std::span<const std::string> s1, std::span<const std::string> s2) {
  if (s1.size() != s2.size()) {
    throw Error(ErrorCode::InvalidArgument, "identity",
                "aligned rows differ in length (" + std::to_string(s1.size()) + " vs " +
                    std::to_string(s2.size()) + ")");
  }
  if (s1.empty()) throw Error(ErrorCode::EmptyAlignment, "identity");
  return percent(count_matches(s1, s2), s1.size());
}

double alignment_score(std::span<const std::string> s1, std::span<const std::string> s2,
                       const ScoreParams& p) {
  if (s1.size() != s2.size()) {
    throw Error(ErrorCode::InvalidArgument, "score", "aligned rows differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) total += score_pair(s1[i], s2[i], p);
  return total;
}

Sequence strip_gaps(std::span<const std::string> gapped) {
  Sequence out;
  for (const auto& s : gapped) {
    if (s != kGap) out.push_back(s);
  }
  return out;
}

std::string check_pair(std::span<const std::string> s1, std::span<const std::string> s2) {
  if (s1.size() != s2.size()) {
    return "length mismatch: " + std::to_string(s1.size()) + " vs " + std::to_string(s2.size());
  }
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (s1[i].empty() || s2[i].empty()) return "empty symbol at position " + std::to_string(i);
    if (s1[i] == kGap && s2[i] == kGap) return "double gap at position " + std::to_string(i);
  }
  return {};
}

namespace {

struct Candidate {
  std::vector<Step> path;
  double score = 0.0;
  std::size_t matches = 0;
  std::size_t length = 0;
};

Candidate evaluate(std::span<const Code> s, std::span<const Code> norm, const ScoreParams& p,
                   DPMatrices& scratch) {
  fill(s, norm, p, scratch);
  Candidate c;
  c.path = traceback(scratch);
  c.score = scratch.F(s.size(), norm.size());
  const PathSummary summary = summarize_path(c.path, s, norm);
  c.matches = summary.matches;
  c.length = summary.length;
  return c;
}

// Strictly higher identity, compared exactly by cross-multiplication. Lower
// index wins identity ties, so callers visit indices in increasing order.
bool better(const Candidate& c, const Candidate& best) {
  return c.matches * best.length > best.matches * c.length;
}

struct Encoded {
  std::vector<Code> s;
  std::vector<std::vector<Code>> norm;
};

Encoded encode_job(std::span<const std::string> s, std::span<const Sequence> norm) {
  Interner interner;
  Encoded e;
  e.s = interner.encode(s);
  e.norm.reserve(norm.size());
  for (const auto& n : norm) e.norm.push_back(interner.encode(n));
  return e;
}

BestMatch finish(std::size_t index, const Candidate& c, std::span<const std::string> s,
                 std::span<const Sequence> norm) {
  BestMatch out;
  out.normative_index = index;
  out.aligned = materialize(c.path, s, norm[index], c.score);
  return out;
}

}  // namespace

BestMatch best_match_serial(std::span<const std::string> s, std::span<const Sequence> norm,
                            const ScoreParams& p) {
  p.validate();
  if (norm.empty()) throw Error(ErrorCode::EmptyNormativeLog, "best_match");
  const Encoded job = encode_job(s, norm);
  DPMatrices scratch;
  Candidate best = evaluate(job.s, job.norm[0], p, scratch);
  std::size_t best_index = 0;
  for (std::size_t k = 1; k < job.norm.size(); ++k) {
    Candidate c = evaluate(job.s, job.norm[k], p, scratch);
    if (better(c, best)) {
      best = std::move(c);
      best_index = k;
    }
  }
  return finish(best_index, best, s, norm);
}

BestMatch best_match(std::span<const std::string> s, std::span<const Sequence> norm,
                     const ScoreParams& p) {
  p.validate();
  if (norm.empty()) throw Error(ErrorCode::EmptyNormativeLog, "best_match");
  const Encoded job = encode_job(s, norm);
  const auto count = static_cast<std::int64_t>(job.norm.size());
  std::vector<Candidate> candidates(job.norm.size());
#pragma omp parallel
  {
    DPMatrices scratch;
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
      auto idx = static_cast<std::size_t>(k);
      candidates[idx] = evaluate(job.s, job.norm[idx], p, scratch);
    }
  }
  // Ordered reduction keeps the lowest index among identity ties.
  std::size_t best_index = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    if (better(candidates[k], candidates[best_index])) best_index = k;
  }
  return finish(best_index, candidates[best_index], s, norm);
}

}  // namespace galign
