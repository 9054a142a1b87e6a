#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sociopred/core.hpp"

namespace sociopred {

/// Lambda_i for every position of a sequence: one more than the longest
/// prefix of the suffix at i that also starts at an earlier position.
/// Earlier occurrences may overlap position i. When the whole suffix has
/// occurred before, Lambda_i is one past its length.
using MatchLengths = std::vector<std::uint64_t>;

/// Entropy rates of one sequence, all in bits/symbol.
struct EntropyReport {
    double h_lz = 0.0;
    double h_iid = 0.0;
    double h_unif = 0.0;
    /// Conditional LZ rates keyed by conditioner name. A conditioner whose
    /// estimate failed maps to nullopt.
    std::map<std::string, std::optional<double>> h_cond;
    double effective_choices = 1.0;
    std::size_t n = 0;
    std::size_t alphabet_size = 0;
};

/// -sum p log2 p, with 0 log 0 = 0.
double plugin_entropy(const EmpiricalDistribution& dist);

/// log2 K. Throws std::invalid_argument for K = 0.
double uniform_rate(std::size_t alphabet_size);

/// Entropy of the sequence's marginal, i.e. the rate of a memoryless process
/// with the same symbol frequencies.
double iid_rate(const CategoricalSequence& seq);

/// O(n log n) match lengths via suffix array, LCP and a longest-previous-factor sweep.
MatchLengths match_lengths(const CategoricalSequence& seq);
MatchLengths match_lengths(std::span<const Code> codes);

/// Direct scan over all earlier start positions. Test oracle only.
MatchLengths match_lengths_naive(const CategoricalSequence& seq);
MatchLengths match_lengths_naive(std::span<const Code> codes);

/// n log2 n / sum Lambda_i. Requires n >= 2.
double lz_rate(const CategoricalSequence& seq);

/// LZ rate of the paired sequence (x[i], y[i]).
double joint_lz_rate(const CategoricalSequence& x, const CategoricalSequence& y);

/// joint_lz_rate(x, y) - lz_rate(y). Not clamped: finite-sample estimates can
/// be negative or exceed lz_rate(x).
double conditional_lz_rate(const CategoricalSequence& x, const CategoricalSequence& y);

/// 2^h, the equivalent number of equally likely outcomes.
double effective_choices(double h);

struct NamedSequence {
    std::string name;
    CategoricalSequence seq;
};

EntropyReport analyze_sequence(const CategoricalSequence& seq,
                               const std::vector<NamedSequence>& conditioners = {});

}  // namespace sociopred
