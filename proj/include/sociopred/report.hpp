#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sociopred/entropy.hpp"
#include "sociopred/ingest.hpp"
#include "sociopred/markov.hpp"

namespace sociopred {

struct RunConfig {
    std::int64_t bin_width = kDefaultBinWidth;
    std::int64_t gap_cap = kDefaultGapCap;
    std::size_t min_length = 50;
    std::int64_t window = kWeekSeconds;
    std::vector<std::size_t> ks = {1, 5};
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    bool bridge = true;
};

/// Throws std::invalid_argument unless every numeric field is positive and ks ascends.
void validate(const RunConfig& config);

struct IndividualAnalysis {
    std::string ego;
    std::size_t entries = 0;
    /// Partner rates; h_cond holds "location" and "gap" when computable.
    EntropyReport partner;
    std::optional<double> partner_mc;
    std::optional<EntropyReport> location;
    std::optional<EntropyReport> gap;
    /// Why an optional sequence is absent.
    std::vector<std::string> notes;
};

struct Exclusion {
    std::string ego;
    std::string reason;
};

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
};

/// Fixed-width histogram; bin i covers [(first + i) * width, (first + i + 1) * width).
struct Histogram {
    double width = 0.1;
    std::int64_t first = 0;
    std::vector<std::size_t> counts;

    double lower(std::size_t i) const { return static_cast<double>(first + static_cast<std::int64_t>(i)) / (1.0 / width); }
    double upper(std::size_t i) const { return lower(i + 1); }
    std::size_t total() const;
};

Histogram make_histogram(std::span<const double> values, double width = 0.1);
Summary summarize(std::span<const double> values);

struct PopulationReport {
    RunConfig config;
    std::vector<IndividualAnalysis> individuals;
    std::vector<Exclusion> excluded;
    /// Keyed by rate name, e.g. "partner.h_lz", "location.h_iid", "partner.h_cond.gap".
    std::map<std::string, Summary> summaries;
    std::map<std::string, Histogram> histograms;
};

struct IndividualPrediction {
    std::string ego;
    EvaluationResult result;
};

struct PredictionReport {
    RunConfig config;
    std::vector<IndividualPrediction> individuals;
    std::vector<Exclusion> excluded;
    /// Pooled over every evaluated event of every individual.
    std::size_t evaluated = 0;
    std::vector<std::size_t> hits;
};

/// Calls task(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

IndividualAnalysis analyze_individual(const BinnedEventStream& stream, const std::string& ego,
                                      const RunConfig& config);
PopulationReport analyze_population(const BinnedEventStream& stream, const RunConfig& config);
PredictionReport predict_population(const BinnedEventStream& stream, const RunConfig& config);

/// Named rates of one individual, in a fixed order.
std::vector<std::pair<std::string, std::optional<double>>> rate_columns(const IndividualAnalysis& a);

std::string to_json(const PopulationReport& report);
std::string to_json(const PredictionReport& report);

// CSV tables. Column order is fixed; absent values are empty cells.
void write_individuals_csv(std::ostream& out, const PopulationReport& report);
void write_excluded_csv(std::ostream& out, const std::vector<Exclusion>& excluded);
void write_summary_csv(std::ostream& out, const PopulationReport& report);
void write_histograms_csv(std::ostream& out, const PopulationReport& report);
void write_predictions_csv(std::ostream& out, const PredictionReport& report);
void write_windows_csv(std::ostream& out, const PredictionReport& report);

}  // namespace sociopred
