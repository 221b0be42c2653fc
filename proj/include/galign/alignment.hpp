#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace galign {

using Sequence = std::vector<std::string>;

// Reserved gap symbol in gapped sequences.
inline constexpr std::string_view kGap = "-";

struct ScoreParams {
  double match = 1.0;
  double gap = -2.0;
  double mismatch = -2.0;

  // match > 0, gap < 0, mismatch < 0; throws Error(InvalidArgument).
  void validate() const;
};

// Which predecessor produced a DP cell. Up consumes a symbol of the first
// sequence against a gap; Left consumes one of the second.
enum class Step : std::uint8_t { None, Diagonal, Up, Left };

// Row-major (n+1) x (m+1) score and traceback matrices.
struct DPMatrices {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> score;
  std::vector<Step> trace;

  double F(std::size_t i, std::size_t j) const { return score[i * cols + j]; }
  Step T(std::size_t i, std::size_t j) const { return trace[i * cols + j]; }
};

struct AlignedPair {
  Sequence s1;
  Sequence s2;
  double score = 0.0;
  double identity = 0.0;  // percent, unrounded
  std::size_t matches = 0;

  std::size_t length() const { return s1.size(); }
};

struct BestMatch {
  std::size_t normative_index = 0;
  AlignedPair aligned;
};

// d(a, b) for two aligned positions; throws Error(BothGaps).
double score_pair(std::string_view a, std::string_view b, const ScoreParams& p);

// Optimal global alignment (Needleman-Wunsch). Ties prefer diagonal, then
// up, then left. Throws Error(ReservedSymbol) if an input contains "-".
AlignedPair align(std::span<const std::string> s1, std::span<const std::string> s2,
                  const ScoreParams& p = {});
AlignedPair align(std::span<const std::string> s1, std::span<const std::string> s2,
                  const ScoreParams& p, DPMatrices& matrices);

// Splits a string into one-character symbols ("HEAHEE" -> H,E,A,H,E,E).
Sequence chars(std::string_view text);

// Percentage of positions where both rows carry the same activity.
// Throws Error(EmptyAlignment) for N = 0 and Error(InvalidArgument) for rows
// of different length.
double identity(std::span<const std::string> s1, std::span<const std::string> s2);
std::size_t count_matches(std::span<const std::string> s1, std::span<const std::string> s2);

// Sum of d over the aligned positions.
double alignment_score(std::span<const std::string> s1, std::span<const std::string> s2,
                       const ScoreParams& p);

Sequence strip_gaps(std::span<const std::string> gapped);

// Checks the gapped-pair invariants: equal length, no double gaps, no empty
// symbols. Returns an empty string when valid, otherwise a description.
std::string check_pair(std::span<const std::string> s1, std::span<const std::string> s2);

// Maximum-identity alignment of `s` against every normative sequence; ties go
// to the lower index. The normative alignments run in parallel (OpenMP);
// best_match_serial is the reference kernel.
BestMatch best_match(std::span<const std::string> s, std::span<const Sequence> norm,
                     const ScoreParams& p = {});
BestMatch best_match_serial(std::span<const std::string> s, std::span<const Sequence> norm,
                            const ScoreParams& p = {});

}  // namespace galign
