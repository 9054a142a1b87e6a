#include "sociopred/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sociopred {

namespace {

// Suffix array of `codes` by prefix doubling over cyclic shifts of
// codes + sentinel, counting sort per round. O(n log n).
std::vector<std::size_t> suffix_array(std::span<const Code> codes) {
    const std::size_t n = codes.size() + 1;
    std::size_t classes = 0;
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s[i] = static_cast<std::size_t>(codes[i]) + 1;
        classes = std::max(classes, s[i] + 1);
    }
    s[n - 1] = 0;
    classes = std::max<std::size_t>(classes, 1);

    std::vector<std::size_t> p(n), c(n), cnt(std::max(classes, n), 0);
    for (auto v : s) ++cnt[v];
    for (std::size_t i = 1; i < classes; ++i) cnt[i] += cnt[i - 1];
    for (std::size_t i = n; i-- > 0;) p[--cnt[s[i]]] = i;
    c[p[0]] = 0;
    classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (s[p[i]] != s[p[i - 1]]) ++classes;
        c[p[i]] = classes - 1;
    }

    std::vector<std::size_t> pn(n), cn(n);
    for (std::size_t h = 1; h < n && classes < n; h <<= 1) {
        for (std::size_t i = 0; i < n; ++i) pn[i] = (p[i] + n - h) % n;
        std::fill(cnt.begin(), cnt.begin() + classes, 0);
        for (std::size_t i = 0; i < n; ++i) ++cnt[c[pn[i]]];
        for (std::size_t i = 1; i < classes; ++i) cnt[i] += cnt[i - 1];
        for (std::size_t i = n; i-- > 0;) p[--cnt[c[pn[i]]]] = pn[i];
        cn[p[0]] = 0;
        classes = 1;
        for (std::size_t i = 1; i < n; ++i) {
            const auto cur = std::pair{c[p[i]], c[(p[i] + h) % n]};
            const auto prev = std::pair{c[p[i - 1]], c[(p[i - 1] + h) % n]};
            if (cur != prev) ++classes;
            cn[p[i]] = classes - 1;
        }
        c.swap(cn);
    }
    // p[0] is the sentinel suffix.
    return {p.begin() + 1, p.end()};
}

// lcp[r] = common prefix length of suffixes sa[r-1] and sa[r]; lcp[0] = 0. Kasai et al.
std::vector<std::size_t> lcp_array(std::span<const Code> codes, const std::vector<std::size_t>& sa) {
    const std::size_t n = codes.size();
    std::vector<std::size_t> rank(n), lcp(n, 0);
    for (std::size_t r = 0; r < n; ++r) rank[sa[r]] = r;
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && codes[i + h] == codes[j + h]) ++h;
        lcp[rank[i]] = h;
        if (h > 0) --h;
    }
    return lcp;
}

double lz_from_lengths(std::size_t n, const MatchLengths& lambdas) {
    const double total = std::accumulate(lambdas.begin(), lambdas.end(), 0.0,
                                         [](double acc, std::uint64_t v) { return acc + static_cast<double>(v); });
    const double dn = static_cast<double>(n);
    return dn * std::log2(dn) / total;
}

void require_equal_length(const CategoricalSequence& x, const CategoricalSequence& y) {
    if (x.size() != y.size()) throw std::invalid_argument("sequences differ in length");
}

}  // namespace

double plugin_entropy(const EmpiricalDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double uniform_rate(std::size_t alphabet_size) {
    if (alphabet_size == 0) throw std::invalid_argument("uniform rate of an empty alphabet");
    return std::log2(static_cast<double>(alphabet_size));
}

double iid_rate(const CategoricalSequence& seq) { return plugin_entropy(marginal(seq)); }

MatchLengths match_lengths(std::span<const Code> codes) {
    const std::size_t n = codes.size();
    if (n == 0) throw InsufficientData("match lengths of an empty sequence");
    const auto sa = suffix_array(codes);
    const auto lcp = lcp_array(codes, sa);

    // Longest previous factor: for each suffix, the best LCP against any suffix
    // starting earlier is attained at the nearest rank on either side whose
    // start is smaller. Each sweep keeps a stack of ranks with increasing start
    // positions; `link` holds the LCP between an entry and the current rank.
    constexpr auto kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> lpf(n, 0);
    struct Entry {
        std::size_t pos;
        std::size_t link;
    };
    std::vector<Entry> stack;
    stack.reserve(n);

    auto sweep = [&](auto ranks, auto lcp_to_next) {
        stack.clear();
        for (std::size_t r : ranks) {
            if (!stack.empty()) stack.back().link = std::min(stack.back().link, lcp_to_next(r));
            while (!stack.empty() && stack.back().pos > sa[r]) {
                const std::size_t link = stack.back().link;
                stack.pop_back();
                if (!stack.empty()) stack.back().link = std::min(stack.back().link, link);
            }
            if (!stack.empty()) lpf[sa[r]] = std::max(lpf[sa[r]], stack.back().link);
            stack.push_back({sa[r], kInf});
        }
    };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    sweep(order, [&](std::size_t r) { return lcp[r]; });
    std::reverse(order.begin(), order.end());
    sweep(order, [&](std::size_t r) { return lcp[r + 1]; });

    MatchLengths lambdas(n);
    for (std::size_t i = 0; i < n; ++i) lambdas[i] = lpf[i] + 1;
    return lambdas;
}

MatchLengths match_lengths(const CategoricalSequence& seq) { return match_lengths(seq.codes()); }

MatchLengths match_lengths_naive(std::span<const Code> codes) {
    const std::size_t n = codes.size();
    if (n == 0) throw InsufficientData("match lengths of an empty sequence");
    MatchLengths lambdas(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 0; j < i; ++j) {
            std::size_t len = 0;
            while (i + len < n && codes[j + len] == codes[i + len]) ++len;
            best = std::max(best, len);
        }
        lambdas[i] = best + 1;
    }
    return lambdas;
}

MatchLengths match_lengths_naive(const CategoricalSequence& seq) { return match_lengths_naive(seq.codes()); }

double lz_rate(const CategoricalSequence& seq) {
    if (seq.size() < 2) throw InsufficientData("LZ rate needs at least 2 symbols");
    return lz_from_lengths(seq.size(), match_lengths(seq));
}

double joint_lz_rate(const CategoricalSequence& x, const CategoricalSequence& y) {
    require_equal_length(x, y);
    return lz_rate(pair(x, y));
}

double conditional_lz_rate(const CategoricalSequence& x, const CategoricalSequence& y) {
    require_equal_length(x, y);
    return joint_lz_rate(x, y) - lz_rate(y);
}

double effective_choices(double h) { return std::exp2(h); }

EntropyReport analyze_sequence(const CategoricalSequence& seq, const std::vector<NamedSequence>& conditioners) {
    EntropyReport report;
    report.n = seq.size();
    report.alphabet_size = seq.alphabet_size();
    report.h_lz = lz_rate(seq);
    report.h_iid = iid_rate(seq);
    report.h_unif = uniform_rate(seq.alphabet_size());
    report.effective_choices = effective_choices(report.h_lz);
    for (const auto& [name, given] : conditioners) {
        try {
            report.h_cond[name] = conditional_lz_rate(seq, given);
        } catch (const std::invalid_argument&) {
            report.h_cond[name] = std::nullopt;
        }
    }
    return report;
}

}  // namespace sociopred
