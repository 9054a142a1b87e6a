// sociopred: entropy-rate and next-partner prediction analysis of interaction logs.
//
//   sociopred analyze  events.csv [--out dir] [--format json|csv]
//   sociopred predict  events.csv [--out dir] [--dump-models] [--no-bridge]
//   sociopred simulate [--stay 0.9 | --matrix "0.9,0.1;0.1,0.9"] [--population N] [--bins N]
//   sociopred oracle   symbols.txt
//
// Exit codes: 0 success, 1 bad input or usage, 2 analyze found no individual
// passing the length filter, 3 oracle engines disagree.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sociopred/entropy.hpp"
#include "sociopred/ingest.hpp"
#include "sociopred/markov.hpp"
#include "sociopred/report.hpp"
#include "sociopred/synth.hpp"

namespace fs = std::filesystem;
using namespace sociopred;

namespace {

constexpr int kExitError = 1;
constexpr int kExitNoIndividuals = 2;
constexpr int kExitMismatch = 3;

struct Shared {
    RunConfig config;
    std::string out_dir;
    std::string format = "json";
};

void add_shared(CLI::App* cmd, Shared& s) {
    cmd->add_option("--bin-width", s.config.bin_width, "Bin width in seconds")->capture_default_str();
    cmd->add_option("--gap-cap", s.config.gap_cap, "Largest inter-event gap symbol, in bins")->capture_default_str();
    cmd->add_option("--min-length", s.config.min_length, "Minimum partner sequence length")->capture_default_str();
    cmd->add_option("--window", s.config.window, "Evaluation window in seconds")->capture_default_str();
    cmd->add_option("--top-k", s.config.ks, "Top-k values to score")->delimiter(',')->capture_default_str();
    cmd->add_option("--seed", s.config.seed, "Random seed")->capture_default_str();
    cmd->add_option("--workers", s.config.workers, "Worker threads")->capture_default_str();
    cmd->add_option("--out", s.out_dir, "Output directory (default: standard output)");
    cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

EventLog read_log(const std::string& path, std::int64_t bin_width) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_event_log(in, bin_width);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void emit(const Shared& s, const std::string& json_name, const std::string& json,
          const std::vector<std::pair<std::string, std::function<void(std::ostream&)>>>& tables) {
    if (s.out_dir.empty()) {
        if (s.format == "json")
            std::cout << json;
        else
            tables.front().second(std::cout);
        return;
    }
    fs::create_directories(s.out_dir);
    if (s.format == "json") {
        open_out(fs::path(s.out_dir) / json_name) << json;
    } else {
        for (const auto& [name, write] : tables) {
            auto out = open_out(fs::path(s.out_dir) / name);
            write(out);
        }
    }
}

int run_analyze(const std::string& path, const Shared& s) {
    validate(s.config);
    const auto stream = bin_events(read_log(path, s.config.bin_width));
    const auto report = analyze_population(stream, s.config);
    emit(s, "report.json", to_json(report),
         {{"individuals.csv", [&](std::ostream& o) { write_individuals_csv(o, report); }},
          {"excluded.csv", [&](std::ostream& o) { write_excluded_csv(o, report.excluded); }},
          {"summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); }},
          {"histograms.csv", [&](std::ostream& o) { write_histograms_csv(o, report); }}});
    if (report.individuals.empty()) {
        std::cerr << "no individual has a partner sequence of at least " << s.config.min_length << " symbols\n";
        return kExitNoIndividuals;
    }
    return 0;
}

int run_predict(const std::string& path, const Shared& s, bool dump_models) {
    validate(s.config);
    const auto stream = bin_events(read_log(path, s.config.bin_width));
    const auto report = predict_population(stream, s.config);
    emit(s, "predictions.json", to_json(report),
         {{"predictions.csv", [&](std::ostream& o) { write_predictions_csv(o, report); }},
          {"windows.csv", [&](std::ostream& o) { write_windows_csv(o, report); }},
          {"excluded.csv", [&](std::ostream& o) { write_excluded_csv(o, report.excluded); }}});
    if (dump_models) {
        if (s.out_dir.empty()) throw std::invalid_argument("--dump-models requires --out");
        const fs::path dir = fs::path(s.out_dir) / "models";
        fs::create_directories(dir);
        for (const auto& ego : stream.egos()) {
            try {
                const auto model = fit_partners(stream, ego);
                auto out = open_out(dir / (ego + ".edges.csv"));
                write_edge_list(out, model);
            } catch (const InsufficientData&) {
            }
        }
    }
    return 0;
}

// "a,b;c,d" -> rows separated by ';', entries by ','.
TransitionMatrix parse_matrix(const std::string& spec) {
    std::vector<std::vector<double>> rows;
    std::stringstream rs(spec);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<double> values;
        std::stringstream vs(row);
        std::string v;
        while (std::getline(vs, v, ',')) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(v, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("matrix entry is not a number: '" + v + "'");
            }
            if (v.find_first_not_of(" \t", used) != std::string::npos)
                throw std::invalid_argument("matrix entry is not a number: '" + v + "'");
            values.push_back(x);
        }
        rows.push_back(std::move(values));
    }
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd p(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != k)
            throw std::invalid_argument("matrix must be square");
        for (Eigen::Index c = 0; c < k; ++c) p(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return TransitionMatrix(std::move(p));
}

struct SimulateArgs {
    std::string matrix;
    double stay = 0.9;
    std::size_t states = 2;
    std::size_t population = 1;
    std::size_t bins = 100000;
    std::size_t locations = 0;
    std::string output;
};

int run_simulate(const SimulateArgs& a, const Shared& s) {
    validate(s.config);
    EventLogSpec spec;
    spec.population = a.population;
    spec.chains = {a.matrix.empty() ? TransitionMatrix::symmetric(a.states, a.stay) : parse_matrix(a.matrix)};
    spec.bin_width = s.config.bin_width;
    spec.span = static_cast<std::int64_t>(a.bins) * s.config.bin_width;
    spec.seed = s.config.seed;
    spec.location_count = a.locations;
    const auto synthetic = gen_event_log(spec);
    if (a.output.empty() || a.output == "-") {
        write_event_log(std::cout, synthetic.log);
    } else {
        auto out = open_out(a.output);
        write_event_log(out, synthetic.log);
    }
    return 0;
}

int run_oracle(const std::string& path, bool inject_fault) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> symbols;
    std::string token;
    while (in >> token) symbols.push_back(token);
    if (symbols.empty()) throw std::invalid_argument(path + " holds no symbols");
    const auto seq = encode_labels(symbols).second;
    auto fast = match_lengths(seq);
    const auto naive = match_lengths_naive(seq);
    if (inject_fault) ++fast.back();
    bool agree = true;
    std::cout << "i,fast,naive,status\n";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const bool ok = fast[i] == naive[i];
        agree = agree && ok;
        std::cout << i + 1 << ',' << fast[i] << ',' << naive[i] << ',' << (ok ? "ok" : "MISMATCH") << '\n';
    }
    if (!agree) {
        std::cerr << "fast and naive match lengths disagree\n";
        return kExitMismatch;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-rate and next-partner prediction analysis of interaction logs"};
    app.require_subcommand(1);

    Shared analyze_opts, predict_opts, simulate_opts;
    std::string analyze_path, predict_path, oracle_path;
    bool dump_models = false;
    bool inject_fault = false;
    SimulateArgs sim;

    auto* analyze = app.add_subcommand("analyze", "Entropy rates of partner, location and gap sequences per individual");
    analyze->add_option("events", analyze_path, "Event CSV (time,ego,alter,location)")->required();
    add_shared(analyze, analyze_opts);

    auto* predict = app.add_subcommand("predict", "Rolling top-k evaluation of per-individual Markov chains");
    predict->add_option("events", predict_path, "Event CSV (time,ego,alter,location)")->required();
    predict->add_flag("--dump-models", dump_models, "Write source,target,probability edge lists per ego");
    bool no_bridge = false;
    predict->add_flag("--no-bridge", no_bridge, "Do not count the transition across a window boundary");
    add_shared(predict, predict_opts);

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic event CSV driven by Markov chains");
    simulate->add_option("--matrix", sim.matrix, "Transition matrix, rows ';'-separated, entries ','-separated");
    simulate->add_option("--stay", sim.stay, "Diagonal probability of a symmetric chain")->capture_default_str();
    simulate->add_option("--states", sim.states, "States of the symmetric chain")->capture_default_str();
    simulate->add_option("--population", sim.population, "Number of egos")->capture_default_str();
    simulate->add_option("--bins", sim.bins, "Bins (events) per ego")->capture_default_str();
    simulate->add_option("--locations", sim.locations, "Distinct locations (0: none)")->capture_default_str();
    simulate->add_option("-o,--output", sim.output, "Output file (default: standard output)");
    add_shared(simulate, simulate_opts);

    auto* oracle = app.add_subcommand("oracle", "Compare fast and naive match lengths on a symbol file");
    oracle->add_option("symbols", oracle_path, "Whitespace-separated symbols")->required();
    oracle->add_flag("--inject-fault", inject_fault)->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return run_analyze(analyze_path, analyze_opts);
        if (*predict) {
            predict_opts.config.bridge = !no_bridge;
            return run_predict(predict_path, predict_opts, dump_models);
        }
        if (*simulate) return run_simulate(sim, simulate_opts);
        if (*oracle) return run_oracle(oracle_path, inject_fault);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
