#include <doctest.h>

#include <random>
#include <sstream>

#include "sociopred/ingest.hpp"

using namespace sociopred;

namespace {
std::vector<Code> codes_of(const CategoricalSequence& s) { return {s.codes().begin(), s.codes().end()}; }

BinnedEventStream stream_of(std::vector<BinnedEntry> entries, std::int64_t bin_width = 300) {
    BinnedEventStream s;
    s.bin_width = bin_width;
    s.entries["A"] = std::move(entries);
    return s;
}
}  // namespace

TEST_CASE("parse_event_log sorts rows and keeps missing locations") {
    const auto log = parse_event_log(std::string("time,ego,alter,location\n600,A,B,L1\n0,A,C,\n"));
    REQUIRE(log.size() == 2);
    CHECK(log.events()[0].time == 0);
    CHECK(log.events()[0].alter == "C");
    CHECK_FALSE(log.events()[0].location);
    CHECK(log.events()[1].location == std::optional<std::string>("L1"));
    CHECK(log.bin_width() == 300);
}

TEST_CASE("parse_event_log edge cases") {
    CHECK(parse_event_log(std::string("time,ego,alter,location\n")).empty());
    CHECK(parse_event_log(std::string("time,ego,alter,location\r\n5,A,B,L\r\n\n")).size() == 1);
    CHECK(parse_event_log(std::string("time,ego,alter,location\n1,\"x,y\",B,\"L \"\"1\"\"\"\n")).events()[0].ego == "x,y");

    SUBCASE("bad time is reported before ego == alter") {
        try {
            parse_event_log(std::string("time,ego,alter,location\nx,A,A,L1\n"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("time") != std::string::npos);
        }
    }
    SUBCASE("ego equals alter") {
        CHECK_THROWS_WITH_AS(parse_event_log(std::string("time,ego,alter,location\n0,A,B,\n5,A,A,L1\n")),
                             "line 3: ego equals alter: A", ParseError);
    }
    SUBCASE("wrong field count, header, negative time") {
        CHECK_THROWS_AS(parse_event_log(std::string("time,ego,alter,location\n1,A,B\n")), ParseError);
        CHECK_THROWS_AS(parse_event_log(std::string("t,e,a,l\n")), ParseError);
        CHECK_THROWS_AS(parse_event_log(std::string("")), ParseError);
        CHECK_THROWS_AS(parse_event_log(std::string("time,ego,alter,location\n-5,A,B,\n")), ParseError);
        CHECK_THROWS_AS(parse_event_log(std::string("time,ego,alter,location\n1.5,A,B,\n")), ParseError);
    }
}

TEST_CASE("bin_events deduplicates within a bin and orders simultaneous alters by label") {
    auto stream = bin_events(parse_event_log(std::string("time,ego,alter,location\n10,A,B,\n250,A,B,L\n")));
    REQUIRE(stream.of("A").size() == 1);
    CHECK(stream.of("A")[0].bin == 0);
    CHECK(stream.of("A")[0].location == std::optional<std::string>("L"));

    stream = bin_events(parse_event_log(std::string("time,ego,alter,location\n400,A,C,\n400,A,B,\n"), 300));
    REQUIRE(stream.of("A").size() == 2);
    CHECK(stream.of("A")[0].alter == "B");
    CHECK(stream.of("A")[1].alter == "C");
    CHECK(stream.of("A")[0].bin == 1);

    // C at t=310 precedes B at t=590 in time, but both fall in bin 1
    stream = bin_events(parse_event_log(std::string("time,ego,alter,location\n310,A,C,\n590,A,B,\n")));
    CHECK(stream.of("A")[0].alter == "B");

    CHECK(bin_events(EventLog()).entries.empty());
    CHECK_THROWS_AS(stream.of("nobody"), std::out_of_range);
}

TEST_CASE("partner_sequence") {
    const auto s = stream_of({{0, "B", {}}, {2, "C", {}}, {3, "B", {}}});
    CHECK(codes_of(partner_sequence(s, "A")) == std::vector<Code>{0, 1, 0});
    CHECK(partner_sequence(stream_of({{0, "B", {}}}), "A").size() == 1);
    const auto both = stream_of({{4, "B", {}}, {4, "C", {}}});
    CHECK(partner_sequence(both, "A").decode() == std::vector<std::string>{"B", "C"});
    CHECK_THROWS_AS(partner_sequence(s, "Z"), std::out_of_range);
}

TEST_CASE("location_sequence skips missing locations") {
    const auto s = stream_of({{0, "B", "L1"}, {1, "B", {}}, {2, "C", "L1"}, {3, "B", "L2"}});
    CHECK(codes_of(location_sequence(s, "A")) == std::vector<Code>{0, 0, 1});
    CHECK_THROWS_AS(location_sequence(stream_of({{0, "B", {}}, {1, "C", {}}}), "A"), InsufficientData);
    CHECK(codes_of(location_sequence(stream_of({{0, "B", "L"}, {1, "C", "L"}}), "A")) == std::vector<Code>{0, 0});
}

TEST_CASE("gap_sequence caps gaps and ignores shared bins") {
    auto s = stream_of({{3, "B", {}}, {5, "B", {}}, {10, "B", {}}});
    CHECK(gap_sequence(s, "A", 4).decode() == std::vector<std::string>{"2", "4"});
    s = stream_of({{0, "B", {}}, {1, "B", {}}, {2, "B", {}}, {3, "B", {}}});
    CHECK(codes_of(gap_sequence(s, "A", 288)) == std::vector<Code>{0, 0, 0});
    s = stream_of({{0, "B", {}}, {0, "C", {}}, {7, "B", {}}});
    CHECK(gap_sequence(s, "A", 288).decode() == std::vector<std::string>{"7"});
    CHECK(gap_sequence(s, "A", 5).decode() == std::vector<std::string>{"5"});
    CHECK_THROWS_AS(gap_sequence(stream_of({{0, "B", {}}, {0, "C", {}}}), "A", 288), InsufficientData);
    CHECK_THROWS_AS(gap_sequence(s, "A", 0), std::invalid_argument);
}

TEST_CASE("aligned conditioners") {
    const auto s = stream_of({{0, "B", "L1"}, {0, "C", {}}, {2, "D", "L2"}, {5, "B", "L1"}});
    const auto loc = partner_given_location(s, "A");
    CHECK(loc.target.decode() == std::vector<std::string>{"B", "D", "B"});
    CHECK(loc.given.decode() == std::vector<std::string>{"L1", "L2", "L1"});
    const auto gap = partner_given_gap(s, "A", 2);
    CHECK(gap.target.decode() == std::vector<std::string>{"D", "B"});
    CHECK(gap.given.decode() == std::vector<std::string>{"2", "2"});
}

TEST_CASE("property: parse is deterministic and write/parse is idempotent") {
    std::mt19937 rng(5);
    const std::vector<std::string> names{"A", "B", "C,D", "E\"F", "G"};
    for (int trial = 0; trial < 50; ++trial) {
        std::ostringstream csv;
        csv << "time,ego,alter,location\n";
        const int rows = static_cast<int>(rng() % 40);
        for (int r = 0; r < rows; ++r) {
            const auto ego = rng() % names.size();
            const auto alter = (ego + 1 + rng() % (names.size() - 1)) % names.size();
            EventLog single({{static_cast<std::int64_t>(rng() % 5000), names[ego], names[alter],
                              rng() % 3 == 0 ? std::optional<std::string>() : std::optional<std::string>("L" + std::to_string(rng() % 3))}},
                            300);
            std::ostringstream row;
            write_event_log(row, single);
            csv << row.str().substr(row.str().find('\n') + 1);
        }
        const auto first = parse_event_log(csv.str());
        CHECK(first == parse_event_log(csv.str()));
        std::ostringstream again;
        write_event_log(again, first);
        CHECK(parse_event_log(again.str()) == first);

        const auto stream = bin_events(first);
        for (const auto& ego : stream.egos()) {
            const auto& entries = stream.of(ego);
            CHECK(partner_sequence(stream, ego).size() == entries.size());
            for (std::size_t i = 1; i < entries.size(); ++i) CHECK(entries[i - 1].bin <= entries[i].bin);
            try {
                const auto gaps = gap_sequence(stream, ego, 3);
                for (const auto& g : gaps.decode()) CHECK((std::stoi(g) >= 1 && std::stoi(g) <= 3));
            } catch (const InsufficientData&) {
            }
        }
    }
}
