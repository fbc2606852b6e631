// ---------------------------------------------------------------------------
// tabmeas CLI
//
// Subcommands:
//   estimate   point estimate of a measure from an observed count table
//   ci         posterior credible interval for a measure
//   simulate   bias/MSE sweep over sample sizes from a known truth table
//
// Exit codes: 0 success, 2 malformed input or usage, 3 measure undefined
// for the given (valid) input. All diagnostics go to standard error; only
// results go to standard output.
// ---------------------------------------------------------------------------

#include "CLI11.hpp"
#include "json.hpp"

#include "tabmeas/error.hpp"
#include "tabmeas/estimators.hpp"
#include "tabmeas/measures.hpp"
#include "tabmeas/montecarlo.hpp"
#include "tabmeas/posterior.hpp"
#include "tabmeas/table.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) tabmeas::raise(tabmeas::errc::bad_argument, "cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Input file name without directory or extension; used as the default
// truth-table label in simulation CSV.
std::string file_stem(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

// "1..10", "3", or "1,2,5" -> list of positive integers.
std::vector<std::uint64_t> parse_gammas(const std::string& text) {
    std::vector<std::uint64_t> out;
    const auto parse_one = [](const std::string& tok) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
            return static_cast<std::uint64_t>(v);
        } catch (const std::exception&) {
            tabmeas::raise(tabmeas::errc::bad_argument, "bad gamma value '" + tok + "'");
        }
    };
    const std::size_t range = text.find("..");
    if (range != std::string::npos) {
        const std::uint64_t lo = parse_one(text.substr(0, range));
        const std::uint64_t hi = parse_one(text.substr(range + 2));
        if (hi < lo)
            tabmeas::raise(tabmeas::errc::bad_argument, "empty gamma range '" + text + "'");
        for (std::uint64_t g = lo; g <= hi; ++g) out.push_back(g);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string tok =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_one(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// "all" or a comma-separated list of rule specs.
std::vector<tabmeas::AlphaRule> parse_rules(const std::string& text) {
    using tabmeas::AlphaRule;
    if (text == "all")
        return {AlphaRule::fixed(0.0), AlphaRule::fixed(0.5), AlphaRule::fixed(1.0),
                AlphaRule::fhm(), AlphaRule::optimal()};
    std::vector<AlphaRule> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string tok =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(tabmeas::parse_rule(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void emit(const ordered_json& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    // csv: one header line, one data row, same fields as the JSON object.
    std::string header, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!header.empty()) {
            header.push_back(',');
            row.push_back(',');
        }
        header += it.key();
        row += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
    std::cout << header << "\n" << row << "\n";
}

struct common_opts {
    std::string input;
    std::string measure = "cramer-v";
    double lambda = 1.0;
    std::string format = "json";
    double alpha_max = -1.0; // < 0 = default n/(rc)
};

void add_common(CLI::App* cmd, common_opts& opt) {
    cmd->add_option("input", opt.input, "input table CSV")->required();
    cmd->add_option("--measure", opt.measure, "cramer-v or symmetry-phi")
        ->capture_default_str();
    cmd->add_option("--lambda", opt.lambda, "power parameter of the measure")
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--alpha-max", opt.alpha_max,
                    "cap for data-driven alpha rules (default: n/(rc))");
}

double resolved_alpha_max(const common_opts& opt, const tabmeas::CountTable& t) {
    return opt.alpha_max >= 0.0 ? opt.alpha_max : tabmeas::default_alpha_max(t);
}

int run_estimate(const common_opts& opt, const std::string& rule_text) {
    const tabmeas::MeasureSpec spec{tabmeas::parse_measure(opt.measure), opt.lambda};
    const tabmeas::AlphaRule rule = tabmeas::parse_rule(rule_text);
    const tabmeas::CountTable t = tabmeas::parse_count_table(read_file(opt.input));
    const tabmeas::EstimateResult res =
        tabmeas::estimate(spec, t, rule, resolved_alpha_max(opt, t));

    ordered_json j;
    j["measure"] = tabmeas::measure_name(spec.kind);
    j["lambda"] = spec.lambda;
    j["rule"] = tabmeas::rule_name(rule);
    j["alpha_used"] = res.alpha_used;
    j["estimate"] = res.estimate;
    if (rule.kind == tabmeas::RuleKind::optimal) {
        j["a1_hat"] = res.diagnostics.a1;
        j["a2_hat"] = res.diagnostics.a2;
        j["clamped"] = res.diagnostics.clamped;
    }
    emit(j, opt.format);
    return 0;
}

int run_ci(const common_opts& opt, const std::string& rule_text, double level,
           std::uint64_t draws, std::uint64_t seed) {
    const tabmeas::MeasureSpec spec{tabmeas::parse_measure(opt.measure), opt.lambda};
    const tabmeas::AlphaRule rule = tabmeas::parse_rule(rule_text);
    const tabmeas::CountTable t = tabmeas::parse_count_table(read_file(opt.input));
    const tabmeas::CredibleInterval ci = tabmeas::credible_interval(
        spec, t, rule, level, draws, seed, resolved_alpha_max(opt, t));

    ordered_json j;
    j["lower"] = ci.lower;
    j["upper"] = ci.upper;
    j["level"] = ci.level;
    j["draws"] = ci.draws;
    j["alpha_used"] = ci.alpha_used;
    j["point"] = ci.point;
    emit(j, opt.format);
    return 0;
}

int run_simulate(const common_opts& opt, const std::string& rules_text,
                 const std::string& gammas_text, std::uint64_t replications,
                 std::uint64_t seed, unsigned threads, const std::string& truth_id) {
    tabmeas::ExperimentConfig config{
        .truth = tabmeas::parse_prob_table(read_file(opt.input)),
        .truth_id = truth_id.empty() ? file_stem(opt.input) : truth_id,
        .spec = tabmeas::MeasureSpec{tabmeas::parse_measure(opt.measure), opt.lambda},
        .rules = parse_rules(rules_text),
        .gammas = parse_gammas(gammas_text),
        .replications = replications,
        .seed = seed,
        .threads = threads,
        .alpha_max = opt.alpha_max,
    };
    const tabmeas::ExperimentResult result = tabmeas::run_experiment(config);
    std::cout << tabmeas::experiment_csv(result);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"association and symmetry measures of two-way contingency tables,\n"
                 "estimated from Dirichlet-smoothed cell probabilities"};
    app.require_subcommand(1);

    common_opts est_opt, ci_opt, sim_opt;
    std::string est_rule = "optimal";
    std::string ci_rule = "optimal";
    double ci_level = 0.95;
    std::uint64_t ci_draws = 10000;
    std::uint64_t ci_seed = 0;
    std::string sim_rules = "all";
    std::string sim_gammas = "1..10";
    std::uint64_t sim_reps = 10000;
    std::uint64_t sim_seed = 0;
    unsigned sim_threads = 0;
    std::string sim_truth_id;

    CLI::App* est = app.add_subcommand(
        "estimate", "estimate a measure from an observed count table");
    add_common(est, est_opt);
    est->add_option("--rule", est_rule, "alpha rule: fixed:X, fhm, or optimal")
        ->capture_default_str();

    CLI::App* ci = app.add_subcommand(
        "ci", "posterior credible interval for a measure from a count table");
    add_common(ci, ci_opt);
    ci->add_option("--rule", ci_rule, "alpha rule: fixed:X, fhm, or optimal")
        ->capture_default_str();
    ci->add_option("--level", ci_level, "credible level in (0, 1)")->capture_default_str();
    ci->add_option("--draws", ci_draws, "number of posterior draws")->capture_default_str();
    ci->add_option("--seed", ci_seed, "RNG seed")->capture_default_str();

    CLI::App* sim = app.add_subcommand(
        "simulate", "bias/MSE sweep from a truth probability table (CSV to stdout)");
    add_common(sim, sim_opt);
    sim->add_option("--rules", sim_rules, "'all' or comma-separated alpha rules")
        ->capture_default_str();
    sim->add_option("--gammas", sim_gammas, "sample sizes as n = gamma*rc: 'lo..hi' or list")
        ->capture_default_str();
    sim->add_option("--replications", sim_reps, "simulated tables per gamma")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    sim->add_option("--threads", sim_threads,
                    "worker threads (0 = machine parallelism; never affects results)")
        ->capture_default_str();
    sim->add_option("--truth-id", sim_truth_id,
                    "label for the truth table in CSV output (default: file stem)");

    try {
        app.parse(argc, argv);
        if (est->parsed()) return run_estimate(est_opt, est_rule);
        if (ci->parsed()) return run_ci(ci_opt, ci_rule, ci_level, ci_draws, ci_seed);
        return run_simulate(sim_opt, sim_rules, sim_gammas, sim_reps, sim_seed, sim_threads,
                            sim_truth_id);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const tabmeas::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_input_error() ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
