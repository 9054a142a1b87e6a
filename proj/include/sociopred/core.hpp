#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sociopred {

using Code = std::uint32_t;

/// Raised when an estimator receives too little data to produce a value.
class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Ordered set of distinct external labels. Codes are the dense integers
/// 0..K-1; `add` hands out the next code, so building an alphabet by walking
/// a label list assigns codes in first-appearance order.
class Alphabet {
public:
    Alphabet() = default;

    /// Builds an alphabet from labels that must already be distinct.
    explicit Alphabet(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }

    const std::string& label(Code code) const;
    std::optional<Code> find(std::string_view label) const;

    /// Returns the code of `label`, appending it if unseen.
    Code add(std::string_view label);

    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, Code> index_;
};

/// A finite-alphabet symbol series. Every code is a valid index into the
/// alphabet; checked at construction.
class CategoricalSequence {
public:
    CategoricalSequence() = default;
    CategoricalSequence(std::vector<Code> codes, Alphabet alphabet);

    std::size_t size() const noexcept { return codes_.size(); }
    bool empty() const noexcept { return codes_.empty(); }
    std::size_t alphabet_size() const noexcept { return alphabet_.size(); }

    Code operator[](std::size_t i) const noexcept { return codes_[i]; }
    std::span<const Code> codes() const noexcept { return codes_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    std::vector<std::string> decode() const;

    /// Contiguous slice [first, first + count) over the same alphabet.
    CategoricalSequence slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const CategoricalSequence&, const CategoricalSequence&) = default;

private:
    std::vector<Code> codes_;
    Alphabet alphabet_;
};

/// Probabilities over the K symbols of an alphabet.
struct EmpiricalDistribution {
    std::vector<double> probs;

    std::size_t size() const noexcept { return probs.size(); }
    double operator[](std::size_t k) const noexcept { return probs[k]; }
};

std::pair<Alphabet, CategoricalSequence> encode_labels(std::span<const std::string> labels);

/// Relative frequency of each code. Throws InsufficientData on an empty sequence.
EmpiricalDistribution marginal(const CategoricalSequence& seq);

/// Sequence of ordered pairs (x[i], y[i]), coded by first appearance of each pair.
/// Pair labels are "<x label>|<y label>".
CategoricalSequence pair(const CategoricalSequence& x, const CategoricalSequence& y);

/// Relabels the sequence so codes follow first appearance. Used to compare
/// code patterns independent of the alphabet ordering.
std::vector<Code> canonical_codes(std::span<const Code> codes);

/// CSV-quotes a field if it contains a comma, quote or line break.
std::string csv_field(const std::string& field);

}  // namespace sociopred
