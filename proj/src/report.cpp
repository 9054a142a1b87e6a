#include "sociopred/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace sociopred {

namespace {

using nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

ordered_json config_json(const RunConfig& c) {
    return {{"bin_width", c.bin_width}, {"gap_cap", c.gap_cap}, {"min_length", c.min_length},
            {"window", c.window},       {"ks", c.ks},           {"seed", c.seed},
            {"bridge", c.bridge}};
}

ordered_json entropy_json(const EntropyReport& r) {
    ordered_json j = {{"n", r.n},         {"alphabet_size", r.alphabet_size}, {"h_lz", r.h_lz},
                      {"h_iid", r.h_iid}, {"h_unif", r.h_unif},               {"effective_choices", r.effective_choices}};
    if (!r.h_cond.empty()) {
        ordered_json cond = ordered_json::object();
        for (const auto& [name, v] : r.h_cond) cond[name] = v ? ordered_json(*v) : ordered_json(nullptr);
        j["h_cond"] = std::move(cond);
    }
    return j;
}

ordered_json excluded_json(const std::vector<Exclusion>& excluded) {
    ordered_json j = ordered_json::array();
    for (const auto& e : excluded) j.push_back({{"ego", e.ego}, {"reason", e.reason}});
    return j;
}

std::string format_number(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string reason_of(const std::exception& e) { return e.what(); }

}  // namespace

void validate(const RunConfig& c) {
    if (c.bin_width <= 0) throw std::invalid_argument("bin width must be positive");
    if (c.gap_cap <= 0) throw std::invalid_argument("gap cap must be positive");
    if (c.min_length == 0) throw std::invalid_argument("minimum length must be positive");
    if (c.window <= 0) throw std::invalid_argument("window must be positive");
    if (c.workers == 0) throw std::invalid_argument("workers must be positive");
    if (c.ks.empty() || c.ks.front() == 0) throw std::invalid_argument("top-k values must be positive");
    if (!std::is_sorted(c.ks.begin(), c.ks.end()) || std::adjacent_find(c.ks.begin(), c.ks.end()) != c.ks.end())
        throw std::invalid_argument("top-k values must be strictly ascending");
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram make_histogram(std::span<const double> values, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("histogram width must be positive");
    Histogram h;
    h.width = width;
    if (values.empty()) return h;
    // Slack keeps values such as 0.3 out of the bin below after the division rounds down.
    auto index = [width](double v) { return static_cast<std::int64_t>(std::floor(v / width + 1e-9)); };
    std::int64_t lo = index(values.front());
    std::int64_t hi = lo;
    for (double v : values) {
        lo = std::min(lo, index(v));
        hi = std::max(hi, index(v));
    }
    h.first = lo;
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (double v : values) ++h.counts[static_cast<std::size_t>(index(v) - lo)];
    return h;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return s;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

IndividualAnalysis analyze_individual(const BinnedEventStream& stream, const std::string& ego,
                                      const RunConfig& config) {
    IndividualAnalysis a;
    a.ego = ego;
    a.entries = stream.of(ego).size();

    const auto partners = partner_sequence(stream, ego);
    if (partners.size() < std::max<std::size_t>(config.min_length, 2))
        throw InsufficientData("partner sequence length " + std::to_string(partners.size()) + " below minimum " +
                               std::to_string(std::max<std::size_t>(config.min_length, 2)));
    a.partner = analyze_sequence(partners);
    a.partner_mc = mc_entropy_rate(fit(partners));

    try {
        const auto aligned = partner_given_location(stream, ego);
        a.partner.h_cond["location"] = conditional_lz_rate(aligned.target, aligned.given);
    } catch (const std::invalid_argument& e) {
        a.notes.push_back("partner given location: " + reason_of(e));
    }
    try {
        const auto aligned = partner_given_gap(stream, ego, config.gap_cap);
        a.partner.h_cond["gap"] = conditional_lz_rate(aligned.target, aligned.given);
    } catch (const std::invalid_argument& e) {
        a.notes.push_back("partner given gap: " + reason_of(e));
    }

    try {
        const auto loc = location_sequence(stream, ego);
        if (loc.size() < config.min_length)
            a.notes.push_back("location sequence length " + std::to_string(loc.size()) + " below minimum");
        else
            a.location = analyze_sequence(loc);
    } catch (const std::invalid_argument& e) {
        a.notes.push_back("location: " + reason_of(e));
    }
    try {
        const auto gaps = gap_sequence(stream, ego, config.gap_cap);
        if (gaps.size() < config.min_length)
            a.notes.push_back("gap sequence length " + std::to_string(gaps.size()) + " below minimum");
        else
            a.gap = analyze_sequence(gaps);
    } catch (const std::invalid_argument& e) {
        a.notes.push_back("gap: " + reason_of(e));
    }
    return a;
}

std::vector<std::pair<std::string, std::optional<double>>> rate_columns(const IndividualAnalysis& a) {
    auto cond = [&](const char* name) -> std::optional<double> {
        auto it = a.partner.h_cond.find(name);
        return it == a.partner.h_cond.end() ? std::nullopt : it->second;
    };
    std::vector<std::pair<std::string, std::optional<double>>> cols = {
        {"partner.h_lz", a.partner.h_lz},
        {"partner.h_iid", a.partner.h_iid},
        {"partner.h_unif", a.partner.h_unif},
        {"partner.h_cond.location", cond("location")},
        {"partner.h_cond.gap", cond("gap")},
        {"partner.h_mc", a.partner_mc},
    };
    for (const auto& [prefix, report] : {std::pair{"location", &a.location}, std::pair{"gap", &a.gap}}) {
        const auto& r = *report;
        cols.emplace_back(std::string(prefix) + ".h_lz", r ? std::optional(r->h_lz) : std::nullopt);
        cols.emplace_back(std::string(prefix) + ".h_iid", r ? std::optional(r->h_iid) : std::nullopt);
        cols.emplace_back(std::string(prefix) + ".h_unif", r ? std::optional(r->h_unif) : std::nullopt);
    }
    return cols;
}

PopulationReport analyze_population(const BinnedEventStream& stream, const RunConfig& config) {
    validate(config);
    const auto egos = stream.egos();
    std::vector<std::optional<IndividualAnalysis>> results(egos.size());
    std::vector<std::string> reasons(egos.size());
    parallel_for(egos.size(), config.workers, [&](std::size_t i) {
        try {
            results[i] = analyze_individual(stream, egos[i], config);
        } catch (const std::invalid_argument& e) {
            reasons[i] = e.what();
        }
    });

    PopulationReport report;
    report.config = config;
    for (std::size_t i = 0; i < egos.size(); ++i) {
        if (results[i])
            report.individuals.push_back(std::move(*results[i]));
        else
            report.excluded.push_back({egos[i], reasons[i]});
    }

    std::map<std::string, std::vector<double>> columns;
    for (const auto& a : report.individuals)
        for (const auto& [name, v] : rate_columns(a))
            if (v) columns[name].push_back(*v);
    for (const auto& [name, values] : columns) {
        report.summaries[name] = summarize(values);
        report.histograms[name] = make_histogram(values);
    }
    return report;
}

PredictionReport predict_population(const BinnedEventStream& stream, const RunConfig& config) {
    validate(config);
    const auto egos = stream.egos();
    const RollingOptions options{config.window, config.ks, config.bridge};
    std::vector<std::optional<EvaluationResult>> results(egos.size());
    std::vector<std::string> reasons(egos.size());
    parallel_for(egos.size(), config.workers, [&](std::size_t i) {
        try {
            results[i] = rolling_evaluate(stream, egos[i], options);
        } catch (const std::invalid_argument& e) {
            reasons[i] = e.what();
        }
    });

    PredictionReport report;
    report.config = config;
    report.hits.assign(config.ks.size(), 0);
    for (std::size_t i = 0; i < egos.size(); ++i) {
        if (!results[i]) {
            report.excluded.push_back({egos[i], reasons[i]});
            continue;
        }
        report.evaluated += results[i]->evaluated;
        for (std::size_t j = 0; j < config.ks.size(); ++j) report.hits[j] += results[i]->hits[j];
        report.individuals.push_back({egos[i], std::move(*results[i])});
    }
    return report;
}

std::string to_json(const PopulationReport& report) {
    ordered_json j;
    j["run"] = {{"tool", "sociopred"}, {"version", kVersion}, {"command", "analyze"}};
    j["config"] = config_json(report.config);
    ordered_json rows = ordered_json::array();
    for (const auto& a : report.individuals) {
        ordered_json row = {{"ego", a.ego}, {"entries", a.entries}, {"partner", entropy_json(a.partner)}};
        if (a.partner_mc) row["partner"]["h_mc"] = *a.partner_mc;
        if (a.location) row["location"] = entropy_json(*a.location);
        if (a.gap) row["gap"] = entropy_json(*a.gap);
        if (!a.notes.empty()) row["notes"] = a.notes;
        rows.push_back(std::move(row));
    }
    j["individuals"] = std::move(rows);
    j["excluded"] = excluded_json(report.excluded);
    ordered_json summaries = ordered_json::object();
    for (const auto& [name, s] : report.summaries)
        summaries[name] = {{"count", s.count}, {"mean", s.mean}, {"median", s.median}};
    j["summary"] = std::move(summaries);
    ordered_json histograms = ordered_json::object();
    for (const auto& [name, h] : report.histograms) {
        ordered_json bins = ordered_json::array();
        for (std::size_t i = 0; i < h.counts.size(); ++i)
            bins.push_back({{"lo", h.lower(i)}, {"hi", h.upper(i)}, {"count", h.counts[i]}});
        histograms[name] = {{"width", h.width}, {"bins", std::move(bins)}};
    }
    j["histograms"] = std::move(histograms);
    return j.dump(2) + "\n";
}

std::string to_json(const PredictionReport& report) {
    ordered_json j;
    j["run"] = {{"tool", "sociopred"},
                {"version", kVersion},
                {"command", "predict"},
                {"prediction_unit", "interaction event"}};
    j["config"] = config_json(report.config);
    auto accuracy_json = [&](std::size_t evaluated, const std::vector<std::size_t>& hits) {
        ordered_json acc = ordered_json::object();
        for (std::size_t i = 0; i < report.config.ks.size(); ++i) {
            const double v = evaluated ? static_cast<double>(hits[i]) / static_cast<double>(evaluated) : 0.0;
            acc["top" + std::to_string(report.config.ks[i])] = v;
        }
        return acc;
    };
    ordered_json rows = ordered_json::array();
    for (const auto& p : report.individuals) {
        ordered_json windows = ordered_json::array();
        for (const auto& w : p.result.windows)
            windows.push_back({{"window", w.window}, {"evaluated", w.evaluated}, {"hits", w.hits}});
        rows.push_back({{"ego", p.ego},
                        {"evaluated", p.result.evaluated},
                        {"hits", p.result.hits},
                        {"accuracy", accuracy_json(p.result.evaluated, p.result.hits)},
                        {"windows", std::move(windows)}});
    }
    j["individuals"] = std::move(rows);
    j["excluded"] = excluded_json(report.excluded);
    j["overall"] = {{"evaluated", report.evaluated},
                    {"hits", report.hits},
                    {"accuracy", accuracy_json(report.evaluated, report.hits)}};
    return j.dump(2) + "\n";
}

void write_individuals_csv(std::ostream& out, const PopulationReport& report) {
    out << "ego,entries,partner_n,partner_k";
    const IndividualAnalysis blank;
    for (const auto& [name, _] : rate_columns(blank)) {
        std::string col = name;
        std::replace(col.begin(), col.end(), '.', '_');
        out << ',' << col;
    }
    out << ",partner_effective_choices,location_n,location_effective_choices,gap_n,gap_effective_choices\n";
    for (const auto& a : report.individuals) {
        out << csv_field(a.ego) << ',' << a.entries << ',' << a.partner.n << ',' << a.partner.alphabet_size;
        for (const auto& [_, v] : rate_columns(a)) out << ',' << cell(v);
        out << ',' << format_number(a.partner.effective_choices);
        for (const auto* r : {&a.location, &a.gap}) {
            if (*r)
                out << ',' << (*r)->n << ',' << format_number((*r)->effective_choices);
            else
                out << ",,";
        }
        out << '\n';
    }
}

void write_excluded_csv(std::ostream& out, const std::vector<Exclusion>& excluded) {
    out << "ego,reason\n";
    for (const auto& e : excluded) out << csv_field(e.ego) << ',' << csv_field(e.reason) << '\n';
}

void write_summary_csv(std::ostream& out, const PopulationReport& report) {
    out << "rate,count,mean,median\n";
    for (const auto& [name, s] : report.summaries)
        out << name << ',' << s.count << ',' << format_number(s.mean) << ',' << format_number(s.median) << '\n';
}

void write_histograms_csv(std::ostream& out, const PopulationReport& report) {
    out << "rate,lo,hi,count\n";
    for (const auto& [name, h] : report.histograms)
        for (std::size_t i = 0; i < h.counts.size(); ++i)
            out << name << ',' << format_number(h.lower(i)) << ',' << format_number(h.upper(i)) << ',' << h.counts[i]
                << '\n';
}

void write_predictions_csv(std::ostream& out, const PredictionReport& report) {
    out << "ego,evaluated";
    for (auto k : report.config.ks) out << ",top" << k << "_hits,top" << k << "_accuracy";
    out << '\n';
    for (const auto& p : report.individuals) {
        out << csv_field(p.ego) << ',' << p.result.evaluated;
        for (std::size_t j = 0; j < report.config.ks.size(); ++j)
            out << ',' << p.result.hits[j] << ',' << format_number(p.result.accuracy(report.config.ks[j]));
        out << '\n';
    }
}

void write_windows_csv(std::ostream& out, const PredictionReport& report) {
    out << "ego,window,evaluated";
    for (auto k : report.config.ks) out << ",top" << k << "_hits";
    out << '\n';
    for (const auto& p : report.individuals) {
        for (const auto& w : p.result.windows) {
            out << csv_field(p.ego) << ',' << w.window << ',' << w.evaluated;
            for (auto h : w.hits) out << ',' << h;
            out << '\n';
        }
    }
}

}  // namespace sociopred
