#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sociopred/core.hpp"
#include "sociopred/ingest.hpp"

namespace sociopred {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// First-order chain over the symbols of one individual's sequence.
/// counts(s, t) is the number of observed s -> t transitions.
class MarkovModel {
public:
    MarkovModel() = default;
    explicit MarkovModel(Alphabet alphabet);

    std::size_t size() const noexcept { return alphabet_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const CountMatrix& counts() const noexcept { return counts_; }
    /// Row sums of counts(): how often each state was a transition source.
    CountVector state_counts() const { return counts_.rowwise().sum(); }
    /// Column sums of counts(): how often each state was a transition target.
    CountVector target_counts() const { return counts_.colwise().sum().transpose(); }
    std::int64_t transitions() const { return counts_.sum(); }

    /// Code of `label` in this model, growing the state space if new.
    Code intern(const std::string& label);

    void add_transition(Code from, Code to);

private:
    Alphabet alphabet_;
    CountMatrix counts_ = CountMatrix::Zero(0, 0);
};

/// Counts each adjacent pair of `seq`. Requires n >= 2.
MarkovModel fit(const CategoricalSequence& seq);

/// Adds the transitions of `seq` (mapped into the model by label) and, when
/// `bridge` is given, one transition bridge -> seq[0].
MarkovModel update(MarkovModel model, const CategoricalSequence& seq, std::optional<Code> bridge = std::nullopt);

/// Row s of the transition matrix. A row without observations falls back to
/// the marginal distribution of transition targets; a model without any
/// transitions yields the uniform distribution.
EmpiricalDistribution transition_probs(const MarkovModel& model, Code state);

/// Marginal distribution of transition targets.
EmpiricalDistribution target_marginal(const MarkovModel& model);

/// sum_s w(s) H(row s), w(s) = state_counts[s] / total transitions.
double mc_entropy_rate(const MarkovModel& model);

/// The k most likely next states from `state`. Ties go to the lower code.
/// Rows with fewer than k positive entries are padded by target-marginal rank.
/// Output length is min(k, K).
std::vector<Code> top_k(const MarkovModel& model, Code state, std::size_t k);

/// Ranking by target-marginal frequency alone, for states the model has not seen.
std::vector<Code> top_k_marginal(const MarkovModel& model, std::size_t k);

/// Writes `source,target,probability` lines for every observed transition.
void write_edge_list(std::ostream& out, const MarkovModel& model);

inline constexpr std::int64_t kWeekSeconds = 7 * 86400;

struct WindowScore {
    std::int64_t window = 0;
    std::size_t evaluated = 0;
    /// hits[j] counts events whose partner was in the top ks[j].
    std::vector<std::size_t> hits;
};

struct EvaluationResult {
    std::vector<std::size_t> ks;
    std::vector<WindowScore> windows;
    std::size_t evaluated = 0;
    std::vector<std::size_t> hits;

    /// Overall fraction of evaluated events with the partner in the top k.
    /// Throws if k was not evaluated.
    double accuracy(std::size_t k) const;
};

struct RollingOptions {
    std::int64_t window = kWeekSeconds;
    std::vector<std::size_t> ks = {1, 5};
    /// Count the transition from the last partner of one window into the next.
    bool bridge = true;
};

/// Train on the first window, then for each later window score every event's
/// partner against the frozen model before folding that window's transitions in.
/// Windows start at the ego's first event and have fixed length.
EvaluationResult rolling_evaluate(const BinnedEventStream& stream, const std::string& ego,
                                  const RollingOptions& options = {});

/// Same protocol over an already-extracted partner sequence with per-symbol
/// window indices (non-decreasing).
EvaluationResult rolling_evaluate(const CategoricalSequence& partners, const std::vector<std::int64_t>& window_of,
                                  const RollingOptions& options = {});

/// Model trained on every transition of the ego's partner sequence.
MarkovModel fit_partners(const BinnedEventStream& stream, const std::string& ego);

}  // namespace sociopred
