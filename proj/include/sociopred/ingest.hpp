#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sociopred/core.hpp"

namespace sociopred {

inline constexpr std::int64_t kDefaultBinWidth = 300;
inline constexpr std::int64_t kDefaultGapCap = 288;

/// Malformed event CSV. `line()` is 1-based and counts the header.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct InteractionEvent {
    std::int64_t time = 0;
    std::string ego;
    std::string alter;
    std::optional<std::string> location;

    friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

/// Events sorted by (time, ego, alter).
class EventLog {
public:
    explicit EventLog(std::int64_t bin_width = kDefaultBinWidth);
    EventLog(std::vector<InteractionEvent> events, std::int64_t bin_width);

    const std::vector<InteractionEvent>& events() const noexcept { return events_; }
    std::int64_t bin_width() const noexcept { return bin_width_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }

    friend bool operator==(const EventLog&, const EventLog&) = default;

private:
    std::vector<InteractionEvent> events_;
    std::int64_t bin_width_;
};

/// One deduplicated (bin, alter) observation for an ego.
struct BinnedEntry {
    std::int64_t bin = 0;
    std::string alter;
    std::optional<std::string> location;

    friend bool operator==(const BinnedEntry&, const BinnedEntry&) = default;
};

/// Per-ego entries ordered by (bin, alter label). Egos are keyed by label, so
/// iteration order is sorted by ego id.
struct BinnedEventStream {
    std::int64_t bin_width = kDefaultBinWidth;
    std::map<std::string, std::vector<BinnedEntry>> entries;

    const std::vector<BinnedEntry>& of(const std::string& ego) const;
    std::vector<std::string> egos() const;
};

EventLog parse_event_log(std::istream& in, std::int64_t bin_width = kDefaultBinWidth);
EventLog parse_event_log(const std::string& text, std::int64_t bin_width = kDefaultBinWidth);

/// Writes the `time,ego,alter,location` CSV accepted by parse_event_log.
void write_event_log(std::ostream& out, const EventLog& log);

BinnedEventStream bin_events(const EventLog& log);

CategoricalSequence partner_sequence(const BinnedEventStream& stream, const std::string& ego);
CategoricalSequence location_sequence(const BinnedEventStream& stream, const std::string& ego);
CategoricalSequence gap_sequence(const BinnedEventStream& stream, const std::string& ego,
                                 std::int64_t cap = kDefaultGapCap);

/// Equal-length (target, conditioner) pair used for conditional rates.
struct AlignedPair {
    CategoricalSequence target;
    CategoricalSequence given;
};

/// Partners of the located entries, aligned with their locations.
AlignedPair partner_given_location(const BinnedEventStream& stream, const std::string& ego);

/// Partner of the first entry of each distinct bin after the first, aligned
/// with the gap that precedes that bin.
AlignedPair partner_given_gap(const BinnedEventStream& stream, const std::string& ego,
                              std::int64_t cap = kDefaultGapCap);

}  // namespace sociopred
