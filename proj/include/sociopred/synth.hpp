#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sociopred/core.hpp"
#include "sociopred/ingest.hpp"

namespace sociopred {

/// Row-stochastic K x K matrix, validated on construction.
class TransitionMatrix {
public:
    explicit TransitionMatrix(Eigen::MatrixXd p);

    /// K states, `stay` on the diagonal, the rest spread evenly off it.
    static TransitionMatrix symmetric(std::size_t states, double stay);

    std::size_t size() const noexcept { return static_cast<std::size_t>(p_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return p_; }
    double operator()(std::size_t from, std::size_t to) const {
        return p_(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to));
    }

private:
    Eigen::MatrixXd p_;
};

/// Deterministic 64-bit source shared by every generator.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Index drawn from the (non-negative, summing to ~1) weights.
    template <typename Weights>
    std::size_t categorical(const Weights& w, std::size_t k) {
        const double u = uniform();
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (w[i] <= 0.0) continue;
            acc += w[i];
            last_positive = i;
            if (u < acc) return i;
        }
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

/// Seed for the `index`-th independent stream under `seed` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Alphabet labelled "0".."K-1" in code order.
Alphabet state_alphabet(std::size_t states);

CategoricalSequence gen_iid(const EmpiricalDistribution& dist, std::size_t n, std::uint64_t seed);

/// Markov chain path of length n. The start state defaults to a uniform draw.
CategoricalSequence gen_markov(const TransitionMatrix& p, std::size_t n, std::uint64_t seed,
                               std::optional<std::size_t> start = std::nullopt);

/// `pattern` repeated and truncated to length n.
CategoricalSequence gen_periodic(const CategoricalSequence& pattern, std::size_t n);

struct StationaryOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 1'000'000;
};

/// Stationary distribution by power iteration. Throws std::domain_error for
/// reducible or periodic chains, or when the residual does not reach tolerance.
Eigen::VectorXd stationary_distribution(const TransitionMatrix& p, const StationaryOptions& options = {});

/// sum_s pi_s H(P[s, .]) in bits.
double analytic_markov_rate(const TransitionMatrix& p, const StationaryOptions& options = {});

struct EventLogSpec {
    std::size_t population = 1;
    /// One matrix shared by all egos, or one per ego.
    std::vector<TransitionMatrix> chains;
    std::int64_t span = 7 * 86400;
    std::int64_t bin_width = kDefaultBinWidth;
    std::uint64_t seed = 0;
    /// When positive, each event carries location "loc<state mod location_count>".
    std::size_t location_count = 0;
};

struct SyntheticLog {
    EventLog log;
    /// Partner-state path per ego, in ego order.
    std::vector<CategoricalSequence> paths;
    std::vector<std::string> egos;
};

/// One event per bin per ego, partner "p<state>" following that ego's chain.
/// Ego ids are "u0000", "u0001", ...
SyntheticLog gen_event_log(const EventLogSpec& spec);

std::string ego_id(std::size_t index);
std::string partner_label(std::size_t state);

}  // namespace sociopred
