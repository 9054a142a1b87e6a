#include "sociopred/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "sociopred/entropy.hpp"

namespace sociopred {

namespace {

constexpr double kRowTolerance = 1e-12;

// Breadth-first levels from state 0 following positive entries (or their
// transpose); -1 marks unreachable states.
std::vector<long> bfs_levels(const Eigen::MatrixXd& p, bool reverse) {
    const auto k = p.rows();
    std::vector<long> level(static_cast<std::size_t>(k), -1);
    std::vector<Eigen::Index> queue{0};
    level[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        for (Eigen::Index v = 0; v < k; ++v) {
            const double w = reverse ? p(v, u) : p(u, v);
            if (w > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
                level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return level;
}

}  // namespace

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd p) : p_(std::move(p)) {
    if (p_.rows() == 0 || p_.rows() != p_.cols()) throw std::invalid_argument("transition matrix must be square and non-empty");
    if (!p_.allFinite() || (p_.array() < 0.0).any()) throw std::invalid_argument("transition matrix has negative or non-finite entries");
    for (Eigen::Index r = 0; r < p_.rows(); ++r) {
        if (std::abs(p_.row(r).sum() - 1.0) > kRowTolerance)
            throw std::invalid_argument("transition matrix row " + std::to_string(r) + " does not sum to 1");
    }
}

TransitionMatrix TransitionMatrix::symmetric(std::size_t states, double stay) {
    if (states == 0) throw std::invalid_argument("need at least one state");
    if (!(stay >= 0.0 && stay <= 1.0)) throw std::invalid_argument("stay probability must be in [0, 1]");
    const auto k = static_cast<Eigen::Index>(states);
    if (k == 1) return TransitionMatrix(Eigen::MatrixXd::Ones(1, 1));
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(k, k, (1.0 - stay) / static_cast<double>(k - 1));
    p.diagonal().setConstant(stay);
    return TransitionMatrix(std::move(p));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Alphabet state_alphabet(std::size_t states) {
    std::vector<std::string> labels;
    labels.reserve(states);
    for (std::size_t s = 0; s < states; ++s) labels.push_back(std::to_string(s));
    return Alphabet(std::move(labels));
}

CategoricalSequence gen_iid(const EmpiricalDistribution& dist, std::size_t n, std::uint64_t seed) {
    if (dist.probs.empty()) throw std::invalid_argument("empty distribution");
    Rng rng(seed);
    std::vector<Code> codes(n);
    for (auto& c : codes) c = static_cast<Code>(rng.categorical(dist.probs, dist.size()));
    return {std::move(codes), state_alphabet(dist.size())};
}

CategoricalSequence gen_markov(const TransitionMatrix& p, std::size_t n, std::uint64_t seed,
                               std::optional<std::size_t> start) {
    const std::size_t k = p.size();
    if (start && *start >= k) throw std::invalid_argument("start state outside chain");
    Rng rng(seed);
    std::vector<Code> codes(n);
    if (n == 0) return {std::move(codes), state_alphabet(k)};
    std::size_t state = start ? *start : static_cast<std::size_t>(rng.uniform() * static_cast<double>(k));
    codes[0] = static_cast<Code>(state);
    for (std::size_t i = 1; i < n; ++i) {
        state = rng.categorical(p.matrix().row(static_cast<Eigen::Index>(state)), k);
        codes[i] = static_cast<Code>(state);
    }
    return {std::move(codes), state_alphabet(k)};
}

CategoricalSequence gen_periodic(const CategoricalSequence& pattern, std::size_t n) {
    if (pattern.empty()) throw std::invalid_argument("periodic pattern is empty");
    std::vector<Code> codes(n);
    for (std::size_t i = 0; i < n; ++i) codes[i] = pattern[i % pattern.size()];
    return {std::move(codes), pattern.alphabet()};
}

Eigen::VectorXd stationary_distribution(const TransitionMatrix& p, const StationaryOptions& options) {
    const Eigen::MatrixXd& m = p.matrix();
    const auto k = m.rows();

    const auto forward = bfs_levels(m, false);
    const auto backward = bfs_levels(m, true);
    for (Eigen::Index s = 0; s < k; ++s) {
        if (forward[static_cast<std::size_t>(s)] < 0 || backward[static_cast<std::size_t>(s)] < 0)
            throw std::domain_error("transition matrix is reducible");
    }
    // Period = gcd of level differences over all edges.
    long period = 0;
    for (Eigen::Index u = 0; u < k; ++u)
        for (Eigen::Index v = 0; v < k; ++v)
            if (m(u, v) > 0.0)
                period = std::gcd(period, std::labs(forward[static_cast<std::size_t>(u)] + 1 -
                                                    forward[static_cast<std::size_t>(v)]));
    if (period != 1) throw std::domain_error("transition matrix is periodic");

    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(k, 1.0 / static_cast<double>(k));
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        Eigen::RowVectorXd next = pi * m;
        next /= next.sum();
        const double residual = (next - pi).lpNorm<1>();
        pi = std::move(next);
        if (residual <= options.tolerance) return pi.transpose();
    }
    throw std::domain_error("power iteration did not converge");
}

double analytic_markov_rate(const TransitionMatrix& p, const StationaryOptions& options) {
    const Eigen::VectorXd pi = stationary_distribution(p, options);
    double h = 0.0;
    for (Eigen::Index s = 0; s < pi.size(); ++s) {
        const Eigen::RowVectorXd row = p.matrix().row(s);
        h += pi(s) * plugin_entropy({{row.data(), row.data() + row.size()}});
    }
    return h;
}

std::string ego_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%04zu", index);
    return buf;
}

std::string partner_label(std::size_t state) { return "p" + std::to_string(state); }

SyntheticLog gen_event_log(const EventLogSpec& spec) {
    if (spec.bin_width <= 0) throw std::invalid_argument("bin width must be positive");
    if (spec.span < 0) throw std::invalid_argument("span must be non-negative");
    if (spec.population > 0 && spec.chains.empty()) throw std::invalid_argument("no transition matrix given");
    if (spec.chains.size() > 1 && spec.chains.size() != spec.population)
        throw std::invalid_argument("need one shared matrix or one per ego");

    SyntheticLog out{EventLog(spec.bin_width), {}, {}};
    const auto bins = static_cast<std::size_t>(spec.span / spec.bin_width);
    std::vector<InteractionEvent> events;
    events.reserve(spec.population * bins);
    for (std::size_t i = 0; i < spec.population; ++i) {
        const auto& chain = spec.chains.size() == 1 ? spec.chains.front() : spec.chains[i];
        auto path = gen_markov(chain, bins, derive_seed(spec.seed, i));
        const std::string ego = ego_id(i);
        for (std::size_t b = 0; b < bins; ++b) {
            InteractionEvent e;
            e.time = static_cast<std::int64_t>(b) * spec.bin_width;
            e.ego = ego;
            e.alter = partner_label(path[b]);
            if (spec.location_count > 0) e.location = "loc" + std::to_string(path[b] % spec.location_count);
            events.push_back(std::move(e));
        }
        out.paths.push_back(std::move(path));
        out.egos.push_back(ego);
    }
    out.log = EventLog(std::move(events), spec.bin_width);
    return out;
}

}  // namespace sociopred
