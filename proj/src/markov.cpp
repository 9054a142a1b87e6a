#include "sociopred/markov.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>

#include "sociopred/entropy.hpp"

namespace sociopred {

namespace {

// States ordered by descending weight, ascending code on ties.
std::vector<Code> rank_by(const CountVector& weights) {
    std::vector<Code> order(static_cast<std::size_t>(weights.size()));
    std::iota(order.begin(), order.end(), Code{0});
    std::stable_sort(order.begin(), order.end(), [&](Code a, Code b) { return weights(a) > weights(b); });
    return order;
}

EmpiricalDistribution normalize(const CountVector& weights) {
    EmpiricalDistribution dist;
    const auto k = static_cast<std::size_t>(weights.size());
    dist.probs.assign(k, 0.0);
    const std::int64_t total = weights.sum();
    for (std::size_t i = 0; i < k; ++i) {
        dist.probs[i] = total > 0 ? static_cast<double>(weights(static_cast<Eigen::Index>(i))) / static_cast<double>(total)
                                  : 1.0 / static_cast<double>(k);
    }
    return dist;
}

void check_state(const MarkovModel& model, Code state) {
    if (state >= model.size()) throw std::out_of_range("state outside model");
}

// Effective row used for prediction: observed row, or target marginal for an unseen source.
CountVector effective_row(const MarkovModel& model, Code state) {
    CountVector row = model.counts().row(state).transpose();
    if (row.sum() == 0) row = model.target_counts();
    return row;
}

}  // namespace

MarkovModel::MarkovModel(Alphabet alphabet)
    : alphabet_(std::move(alphabet)),
      counts_(CountMatrix::Zero(static_cast<Eigen::Index>(alphabet_.size()),
                                static_cast<Eigen::Index>(alphabet_.size()))) {}

Code MarkovModel::intern(const std::string& label) {
    const Code code = alphabet_.add(label);
    const auto k = static_cast<Eigen::Index>(alphabet_.size());
    if (counts_.rows() < k) {
        const auto old = counts_.rows();
        counts_.conservativeResize(k, k);
        counts_.bottomRows(k - old).setZero();
        counts_.rightCols(k - old).setZero();
    }
    return code;
}

void MarkovModel::add_transition(Code from, Code to) {
    check_state(*this, from);
    check_state(*this, to);
    ++counts_(from, to);
}

MarkovModel fit(const CategoricalSequence& seq) {
    if (seq.size() < 2) throw InsufficientData("fitting a Markov chain needs at least 2 symbols");
    MarkovModel model(seq.alphabet());
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) model.add_transition(seq[i], seq[i + 1]);
    return model;
}

MarkovModel update(MarkovModel model, const CategoricalSequence& seq, std::optional<Code> bridge) {
    if (seq.empty()) return model;
    std::vector<Code> mapped(seq.alphabet_size());
    for (Code c = 0; c < seq.alphabet_size(); ++c) mapped[c] = model.intern(seq.alphabet().label(c));
    if (bridge) model.add_transition(*bridge, mapped[seq[0]]);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) model.add_transition(mapped[seq[i]], mapped[seq[i + 1]]);
    return model;
}

EmpiricalDistribution transition_probs(const MarkovModel& model, Code state) {
    check_state(model, state);
    return normalize(effective_row(model, state));
}

EmpiricalDistribution target_marginal(const MarkovModel& model) { return normalize(model.target_counts()); }

double mc_entropy_rate(const MarkovModel& model) {
    const std::int64_t total = model.transitions();
    if (total == 0) throw InsufficientData("Markov entropy rate needs at least one transition");
    const CountVector sources = model.state_counts();
    double h = 0.0;
    for (Code s = 0; s < model.size(); ++s) {
        if (sources(s) == 0) continue;
        const double w = static_cast<double>(sources(s)) / static_cast<double>(total);
        h += w * plugin_entropy(transition_probs(model, s));
    }
    return h;
}

std::vector<Code> top_k_marginal(const MarkovModel& model, std::size_t k) {
    auto order = rank_by(model.target_counts());
    order.resize(std::min(k, order.size()));
    return order;
}

std::vector<Code> top_k(const MarkovModel& model, Code state, std::size_t k) {
    if (k == 0) throw std::invalid_argument("top_k needs k >= 1");
    check_state(model, state);
    const CountVector row = effective_row(model, state);
    std::vector<Code> out;
    out.reserve(std::min(k, model.size()));
    for (Code c : rank_by(row)) {
        if (out.size() == k || row(c) == 0) break;
        out.push_back(c);
    }
    for (Code c : rank_by(model.target_counts())) {
        if (out.size() == k) break;
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

void write_edge_list(std::ostream& out, const MarkovModel& model) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(12);
    out << "source,target,probability\n";
    const CountVector sources = model.state_counts();
    for (Code s = 0; s < model.size(); ++s) {
        for (Code t = 0; t < model.size(); ++t) {
            const auto c = model.counts()(s, t);
            if (c == 0) continue;
            out << csv_field(model.alphabet().label(s)) << ',' << csv_field(model.alphabet().label(t)) << ','
                << static_cast<double>(c) / static_cast<double>(sources(s)) << '\n';
        }
    }
    out.flags(flags);
    out.precision(precision);
}

double EvaluationResult::accuracy(std::size_t k) const {
    auto it = std::find(ks.begin(), ks.end(), k);
    if (it == ks.end()) throw std::invalid_argument("top-" + std::to_string(k) + " was not evaluated");
    if (evaluated == 0) return 0.0;
    return static_cast<double>(hits[static_cast<std::size_t>(it - ks.begin())]) / static_cast<double>(evaluated);
}

EvaluationResult rolling_evaluate(const CategoricalSequence& partners, const std::vector<std::int64_t>& window_of,
                                  const RollingOptions& options) {
    if (partners.size() != window_of.size()) throw std::invalid_argument("window index per symbol required");
    if (options.ks.empty() || options.ks.front() == 0) throw std::invalid_argument("ks must be positive");
    if (!std::is_sorted(options.ks.begin(), options.ks.end())) throw std::invalid_argument("ks must be ascending");
    if (!std::is_sorted(window_of.begin(), window_of.end()))
        throw std::invalid_argument("window indices must be non-decreasing");
    if (partners.empty() || window_of.back() == window_of.front())
        throw InsufficientData("rolling evaluation needs events in at least 2 windows");

    const std::size_t kmax = options.ks.back();
    EvaluationResult result;
    result.ks = options.ks;
    result.hits.assign(options.ks.size(), 0);

    const std::int64_t first = window_of.front();
    std::size_t begin = 0;
    std::size_t end = 0;
    MarkovModel model;
    const auto& labels = partners.alphabet();

    while (begin < partners.size()) {
        const std::int64_t w = window_of[begin];
        end = begin;
        while (end < partners.size() && window_of[end] == w) ++end;

        if (w != first) {
            WindowScore score{w - first, 0, std::vector<std::size_t>(options.ks.size(), 0)};
            for (std::size_t i = begin; i < end; ++i) {
                const auto state = model.alphabet().find(labels.label(partners[i - 1]));
                const auto ranking = state ? top_k(model, *state, kmax) : top_k_marginal(model, kmax);
                const auto truth = model.alphabet().find(labels.label(partners[i]));
                ++score.evaluated;
                if (!truth) continue;
                const auto pos = static_cast<std::size_t>(std::find(ranking.begin(), ranking.end(), *truth) - ranking.begin());
                for (std::size_t j = 0; j < options.ks.size(); ++j)
                    if (pos < options.ks[j]) ++score.hits[j];
            }
            result.evaluated += score.evaluated;
            for (std::size_t j = 0; j < options.ks.size(); ++j) result.hits[j] += score.hits[j];
            result.windows.push_back(std::move(score));
        }

        std::optional<Code> bridge;
        if (options.bridge && begin > 0) bridge = model.alphabet().find(labels.label(partners[begin - 1]));
        model = update(std::move(model), partners.slice(begin, end - begin), bridge);
        begin = end;
    }
    return result;
}

EvaluationResult rolling_evaluate(const BinnedEventStream& stream, const std::string& ego,
                                  const RollingOptions& options) {
    if (options.window <= 0) throw std::invalid_argument("window length must be positive");
    const auto& entries = stream.of(ego);
    const auto partners = partner_sequence(stream, ego);
    std::vector<std::int64_t> window_of;
    window_of.reserve(entries.size());
    for (const auto& e : entries)
        window_of.push_back((e.bin - entries.front().bin) * stream.bin_width / options.window);
    return rolling_evaluate(partners, window_of, options);
}

MarkovModel fit_partners(const BinnedEventStream& stream, const std::string& ego) {
    return fit(partner_sequence(stream, ego));
}

}  // namespace sociopred
