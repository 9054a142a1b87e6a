#include <doctest.h>

#include <numeric>
#include <random>

#include "sociopred/core.hpp"

using namespace sociopred;

namespace {
std::vector<Code> codes_of(const CategoricalSequence& s) { return {s.codes().begin(), s.codes().end()}; }
CategoricalSequence seq_of(std::vector<Code> codes, std::size_t k) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back("s" + std::to_string(i));
    return {std::move(codes), Alphabet(labels)};
}
}  // namespace

TEST_CASE("encode_labels assigns codes by first appearance") {
    const std::vector<std::string> labels{"a", "b", "a"};
    auto [alphabet, seq] = encode_labels(labels);
    CHECK(codes_of(seq) == std::vector<Code>{0, 1, 0});
    CHECK(alphabet.size() == 2);
    CHECK(seq.decode() == labels);

    auto [empty_alpha, empty_seq] = encode_labels(std::vector<std::string>{});
    CHECK(empty_alpha.size() == 0);
    CHECK(empty_seq.empty());

    auto [one, constant] = encode_labels(std::vector<std::string>{"x", "x", "x"});
    CHECK(one.size() == 1);
    CHECK(codes_of(constant) == std::vector<Code>{0, 0, 0});
}

TEST_CASE("alphabet rejects duplicates and unknown codes") {
    CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
    Alphabet a({"a", "b"});
    CHECK(a.find("b") == Code{1});
    CHECK_FALSE(a.find("c"));
    CHECK_THROWS_AS(a.label(2), std::out_of_range);
    CHECK_THROWS_AS(CategoricalSequence({0, 2}, a), std::invalid_argument);
}

TEST_CASE("marginal") {
    CHECK(marginal(seq_of({0, 1}, 2)).probs == std::vector<double>{0.5, 0.5});
    CHECK(marginal(seq_of({0, 0, 0, 1}, 2)).probs == std::vector<double>{0.75, 0.25});
    CHECK(marginal(seq_of({0, 0}, 1)).probs == std::vector<double>{1.0});
    CHECK_THROWS_AS(marginal(seq_of({}, 1)), InsufficientData);
}

TEST_CASE("pair codes ordered pairs by first appearance") {
    auto p = pair(seq_of({0, 1}, 2), seq_of({1, 0}, 2));
    CHECK(codes_of(p) == std::vector<Code>{0, 1});
    CHECK(p.alphabet().labels() == std::vector<std::string>{"s0|s1", "s1|s0"});

    auto c = pair(seq_of({0, 0}, 1), seq_of({0, 0}, 1));
    CHECK(codes_of(c) == std::vector<Code>{0, 0});
    CHECK(c.alphabet_size() == 1);

    CHECK_THROWS_AS(pair(seq_of({0}, 1), seq_of({0, 0}, 1)), std::invalid_argument);
}

TEST_CASE("pair keeps distinct pairs apart when labels contain the separator") {
    auto x = encode_labels(std::vector<std::string>{"a|b", "a"}).second;
    auto y = encode_labels(std::vector<std::string>{"c", "b|c"}).second;
    auto p = pair(x, y);
    CHECK(p.alphabet_size() == 2);
    CHECK(p[0] != p[1]);
}

TEST_CASE("property: round trip, marginal sum, pair projection") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 60;
        const std::size_t k = 1 + rng() % 6;
        std::vector<std::string> labels;
        std::vector<Code> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back("L" + std::to_string(rng() % k));
            xs.push_back(static_cast<Code>(rng() % k));
            ys.push_back(static_cast<Code>(rng() % k));
        }
        auto [alphabet, seq] = encode_labels(labels);
        REQUIRE(seq.decode() == labels);
        // codes are exactly 0..K-1 in first-appearance order
        CHECK(canonical_codes(seq.codes()) == codes_of(seq));

        const auto dist = marginal(seq);
        CHECK(std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));

        const auto x = seq_of(xs, k);
        const auto y = seq_of(ys, k);
        const auto p = pair(x, y);
        std::vector<Code> px, py;
        for (Code c : p.codes()) {
            const auto& label = p.alphabet().label(c);
            const auto bar = label.find('|');
            px.push_back(*x.alphabet().find(label.substr(0, bar)));
            py.push_back(*y.alphabet().find(label.substr(bar + 1)));
        }
        CHECK(px == xs);
        CHECK(py == ys);
        CHECK(canonical_codes(pair(x, x).codes()) == canonical_codes(x.codes()));
    }
}
