#include "sociopred/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>

namespace sociopred {

namespace {

constexpr const char* kHeader = "time,ego,alter,location";

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else {
            if (was_quoted) throw ParseError(line_no, "characters after closing quote");
            field.push_back(c);
        }
    }
    if (quoted) throw ParseError(line_no, "unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

std::int64_t parse_time(const std::string& s, std::size_t line_no) {
    std::int64_t value = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (s.empty() || ec != std::errc{} || ptr != last)
        throw ParseError(line_no, "time is not an integer: '" + s + "'");
    if (value < 0) throw ParseError(line_no, "time is negative");
    return value;
}

auto event_key(const InteractionEvent& e) { return std::tie(e.time, e.ego, e.alter, e.location); }

std::vector<std::int64_t> distinct_bins(const std::vector<BinnedEntry>& entries) {
    std::vector<std::int64_t> bins;
    for (const auto& e : entries)
        if (bins.empty() || bins.back() != e.bin) bins.push_back(e.bin);
    return bins;
}

std::string gap_label(std::int64_t delta, std::int64_t cap) { return std::to_string(std::min(delta, cap)); }

CategoricalSequence encode(const std::vector<std::string>& labels) {
    return encode_labels(labels).second;
}

}  // namespace

EventLog::EventLog(std::int64_t bin_width) : bin_width_(bin_width) {
    if (bin_width_ <= 0) throw std::invalid_argument("bin width must be positive");
}

EventLog::EventLog(std::vector<InteractionEvent> events, std::int64_t bin_width)
    : events_(std::move(events)), bin_width_(bin_width) {
    if (bin_width_ <= 0) throw std::invalid_argument("bin width must be positive");
    for (const auto& e : events_) {
        if (e.time < 0) throw std::invalid_argument("event time is negative");
        if (e.ego == e.alter) throw std::invalid_argument("event has ego == alter: " + e.ego);
    }
    std::sort(events_.begin(), events_.end(),
              [](const auto& a, const auto& b) { return event_key(a) < event_key(b); });
}

const std::vector<BinnedEntry>& BinnedEventStream::of(const std::string& ego) const {
    auto it = entries.find(ego);
    if (it == entries.end()) throw std::out_of_range("unknown ego: " + ego);
    return it->second;
}

std::vector<std::string> BinnedEventStream::egos() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& [ego, _] : entries) out.push_back(ego);
    return out;
}

EventLog parse_event_log(std::istream& in, std::int64_t bin_width) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<InteractionEvent> events;

    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line != kHeader) throw ParseError(1, std::string("expected header '") + kHeader + "'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_record(line, line_no);
        if (fields.size() != 4)
            throw ParseError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        InteractionEvent e;
        e.time = parse_time(fields[0], line_no);
        if (fields[1].empty()) throw ParseError(line_no, "empty ego");
        if (fields[2].empty()) throw ParseError(line_no, "empty alter");
        if (fields[1] == fields[2]) throw ParseError(line_no, "ego equals alter: " + fields[1]);
        e.ego = std::move(fields[1]);
        e.alter = std::move(fields[2]);
        if (!fields[3].empty()) e.location = std::move(fields[3]);
        events.push_back(std::move(e));
    }
    return EventLog(std::move(events), bin_width);
}

EventLog parse_event_log(const std::string& text, std::int64_t bin_width) {
    std::istringstream in(text);
    return parse_event_log(in, bin_width);
}

void write_event_log(std::ostream& out, const EventLog& log) {
    out << kHeader << '\n';
    for (const auto& e : log.events()) {
        out << e.time << ',' << csv_field(e.ego) << ',' << csv_field(e.alter) << ','
            << (e.location ? csv_field(*e.location) : std::string()) << '\n';
    }
}

BinnedEventStream bin_events(const EventLog& log) {
    BinnedEventStream stream;
    stream.bin_width = log.bin_width();
    for (const auto& e : log.events()) {
        auto& entries = stream.entries[e.ego];
        BinnedEntry entry{e.time / log.bin_width(), e.alter, e.location};
        // Events arrive time-sorted, so bins are non-decreasing per ego; only
        // the tail bin can hold a duplicate.
        auto it = std::find_if(entries.rbegin(), entries.rend(), [&](const BinnedEntry& b) {
            return b.bin != entry.bin || b.alter == entry.alter;
        });
        if (it != entries.rend() && it->bin == entry.bin && it->alter == entry.alter) {
            if (!it->location) it->location = entry.location;
            continue;
        }
        entries.push_back(std::move(entry));
    }
    for (auto& [_, entries] : stream.entries) {
        std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return std::tie(a.bin, a.alter) < std::tie(b.bin, b.alter);
        });
    }
    return stream;
}

CategoricalSequence partner_sequence(const BinnedEventStream& stream, const std::string& ego) {
    const auto& entries = stream.of(ego);
    std::vector<std::string> labels;
    labels.reserve(entries.size());
    for (const auto& e : entries) labels.push_back(e.alter);
    return encode(labels);
}

CategoricalSequence location_sequence(const BinnedEventStream& stream, const std::string& ego) {
    std::vector<std::string> labels;
    for (const auto& e : stream.of(ego))
        if (e.location) labels.push_back(*e.location);
    if (labels.empty()) throw InsufficientData("ego " + ego + " has no location data");
    return encode(labels);
}

CategoricalSequence gap_sequence(const BinnedEventStream& stream, const std::string& ego, std::int64_t cap) {
    if (cap <= 0) throw std::invalid_argument("gap cap must be positive");
    const auto bins = distinct_bins(stream.of(ego));
    if (bins.size() < 2) throw InsufficientData("ego " + ego + " has fewer than 2 distinct bins");
    std::vector<std::string> labels;
    labels.reserve(bins.size() - 1);
    for (std::size_t i = 1; i < bins.size(); ++i) labels.push_back(gap_label(bins[i] - bins[i - 1], cap));
    return encode(labels);
}

AlignedPair partner_given_location(const BinnedEventStream& stream, const std::string& ego) {
    std::vector<std::string> partners;
    std::vector<std::string> locations;
    for (const auto& e : stream.of(ego)) {
        if (!e.location) continue;
        partners.push_back(e.alter);
        locations.push_back(*e.location);
    }
    if (locations.empty()) throw InsufficientData("ego " + ego + " has no location data");
    return {encode(partners), encode(locations)};
}

AlignedPair partner_given_gap(const BinnedEventStream& stream, const std::string& ego, std::int64_t cap) {
    if (cap <= 0) throw std::invalid_argument("gap cap must be positive");
    const auto& entries = stream.of(ego);
    std::vector<std::string> partners;
    std::vector<std::string> gaps;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].bin == entries[i - 1].bin) continue;
        partners.push_back(entries[i].alter);
        gaps.push_back(gap_label(entries[i].bin - entries[i - 1].bin, cap));
    }
    if (gaps.empty()) throw InsufficientData("ego " + ego + " has fewer than 2 distinct bins");
    return {encode(partners), encode(gaps)};
}

}  // namespace sociopred
