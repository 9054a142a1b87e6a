#include "sociopred/core.hpp"

#include <algorithm>

namespace sociopred {

Alphabet::Alphabet(std::vector<std::string> labels) {
    labels_.reserve(labels.size());
    for (auto& l : labels) {
        if (index_.contains(l)) throw std::invalid_argument("duplicate alphabet label: " + l);
        index_.emplace(l, static_cast<Code>(labels_.size()));
        labels_.push_back(std::move(l));
    }
}

const std::string& Alphabet::label(Code code) const {
    if (code >= labels_.size()) throw std::out_of_range("code outside alphabet");
    return labels_[code];
}

std::optional<Code> Alphabet::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Code Alphabet::add(std::string_view label) {
    auto [it, inserted] = index_.try_emplace(std::string(label), static_cast<Code>(labels_.size()));
    if (inserted) labels_.emplace_back(label);
    return it->second;
}

CategoricalSequence::CategoricalSequence(std::vector<Code> codes, Alphabet alphabet)
    : codes_(std::move(codes)), alphabet_(std::move(alphabet)) {
    const auto k = alphabet_.size();
    if (std::any_of(codes_.begin(), codes_.end(), [k](Code c) { return c >= k; }))
        throw std::invalid_argument("sequence code outside alphabet");
}

std::vector<std::string> CategoricalSequence::decode() const {
    std::vector<std::string> out;
    out.reserve(codes_.size());
    for (Code c : codes_) out.push_back(alphabet_.label(c));
    return out;
}

CategoricalSequence CategoricalSequence::slice(std::size_t first, std::size_t count) const {
    if (first > codes_.size() || count > codes_.size() - first)
        throw std::out_of_range("slice outside sequence");
    return {std::vector<Code>(codes_.begin() + first, codes_.begin() + first + count), alphabet_};
}

std::pair<Alphabet, CategoricalSequence> encode_labels(std::span<const std::string> labels) {
    Alphabet alphabet;
    std::vector<Code> codes;
    codes.reserve(labels.size());
    for (const auto& l : labels) codes.push_back(alphabet.add(l));
    CategoricalSequence seq(std::move(codes), alphabet);
    return {std::move(alphabet), std::move(seq)};
}

EmpiricalDistribution marginal(const CategoricalSequence& seq) {
    if (seq.empty()) throw InsufficientData("marginal distribution of an empty sequence is undefined");
    std::vector<std::size_t> counts(seq.alphabet_size(), 0);
    for (Code c : seq.codes()) ++counts[c];
    EmpiricalDistribution dist;
    dist.probs.reserve(counts.size());
    const double n = static_cast<double>(seq.size());
    for (auto c : counts) dist.probs.push_back(static_cast<double>(c) / n);
    return dist;
}

CategoricalSequence pair(const CategoricalSequence& x, const CategoricalSequence& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pair: sequences differ in length");
    std::unordered_map<std::uint64_t, Code> seen;
    std::vector<std::string> labels;
    std::unordered_map<std::string, Code> label_index;
    std::vector<Code> codes;
    codes.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::uint64_t key = (static_cast<std::uint64_t>(x[i]) << 32) | y[i];
        auto it = seen.find(key);
        if (it == seen.end()) {
            const auto c = static_cast<Code>(labels.size());
            std::string label = x.alphabet().label(x[i]) + "|" + y.alphabet().label(y[i]);
            // labels containing '|' can collide; identity comes from the code pair
            if (label_index.contains(label)) label += "#" + std::to_string(c);
            label_index.emplace(label, c);
            labels.push_back(std::move(label));
            it = seen.emplace(key, c).first;
        }
        codes.push_back(it->second);
    }
    return {std::move(codes), Alphabet(std::move(labels))};
}

std::vector<Code> canonical_codes(std::span<const Code> codes) {
    std::unordered_map<Code, Code> remap;
    std::vector<Code> out;
    out.reserve(codes.size());
    for (Code c : codes) {
        auto [it, _] = remap.try_emplace(c, static_cast<Code>(remap.size()));
        out.push_back(it->second);
    }
    return out;
}

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace sociopred
