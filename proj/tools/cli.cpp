#include "cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coupled_fp/certificate.hpp"
#include "coupled_fp/errors.hpp"
#include "coupled_fp/iteration.hpp"
#include "coupled_fp/parallel.hpp"
#include "coupled_fp/problems.hpp"
#include "coupled_fp/reports.hpp"

namespace cfp::cli {

namespace {

struct Options {
    std::string problem;
    std::string config;
    double tol = 1e-10;
    std::size_t max_iter = 1000;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::size_t> samples;
    std::uint64_t rng_seed = 0;
    std::string trace;
    bool json = false;
};

constexpr std::size_t kDefaultSamples = 10000;
constexpr std::size_t kDefaultExtraSeeds = 4;

ProblemSpec load_problem(const Options& o) {
    if (o.problem.empty() == o.config.empty()) {
        throw InputError("give exactly one of --problem or --config");
    }
    if (!o.problem.empty()) return make_builtin(o.problem);
    std::ifstream in(o.config);
    if (!in) throw InputError("cannot read config file '" + o.config + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return build_problem_from_text(buf.str());
}

std::optional<ContractionParams> params_from(const Options& o, const ProblemSpec& p) {
    if (o.alpha.has_value() != o.beta.has_value()) {
        throw InputError("--alpha and --beta must be given together");
    }
    if (o.alpha) return ContractionParams(*o.alpha, *o.beta);
    return p.suggested_params;
}

void emit(std::ostream& out, const Options& o, const nlohmann::json& doc, const std::string& text) {
    if (o.json) out << doc.dump(2) << "\n";
    else out << text;
}

int cmd_solve(const Options& o, std::ostream& out) {
    ProblemSpec p = load_problem(o);
    IterationConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.params = params_from(o, p);
    cfg.record_trace = true;
    auto [result, trace] = iterate(p.space, p.map, p.x0, p.y0, cfg);
    const ChainReport chain = check_monotone_chain(p.space, trace, result.fixed_pair);
    if (!o.trace.empty()) {
        std::ofstream csv(o.trace);
        if (!csv) throw InputError("cannot write trace file '" + o.trace + "'");
        write_trace_csv(csv, trace, p.space.dim);
    }
    nlohmann::json doc = to_json(result);
    doc["problem"] = p.name;
    doc["monotone_chain"] = to_json(chain);
    emit(out, o, doc, "problem: " + p.name + "\n" + format_text(result, chain));
    return result.converged ? kOk : kDivergence;
}

int cmd_certify(const Options& o, std::ostream& out) {
    ProblemSpec p = load_problem(o);
    auto params = params_from(o, p);
    if (!params) throw InputError("certify needs --alpha and --beta (problem has no suggested params)");
    const CertificateReport report =
        certify_region(p.space, p.map, *params, p.map.domain_box(), o.samples.value_or(kDefaultSamples),
                       o.rng_seed, p.adversarial_pairs, 0);
    emit(out, o, to_json(report), format_text(report));
    return report.violations == 0 ? kOk : kHypothesisViolated;
}

int cmd_estimate(const Options& o, std::ostream& out) {
    ProblemSpec p = load_problem(o);
    std::vector<SamplePair> samples = sample_comparable_pairs(
        p.space, p.map, p.map.domain_box(), o.samples.value_or(kDefaultSamples), o.rng_seed, 0);
    for (auto& s : directed_samples(p.space, p.map, p.map.domain_box(), p.adversarial_pairs)) {
        samples.push_back(std::move(s));
    }
    const ParamEstimate est = estimate_params(samples);
    emit(out, o, to_json(est), format_text(est));
    return est.feasible ? kOk : kHypothesisViolated;
}

int cmd_check_monotone(const Options& o, std::ostream& out) {
    ProblemSpec p = load_problem(o);
    const MonotoneReport report =
        mixed_monotone_check(p.space, p.map, o.samples.value_or(kDefaultSamples), o.rng_seed, 0);
    emit(out, o, to_json(report), format_text(report));
    return report.falsified() ? kHypothesisViolated : kOk;
}

int cmd_probe(const Options& o, std::ostream& out) {
    ProblemSpec p = load_problem(o);
    IterationConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.params = params_from(o, p);

    std::vector<PairPoint> seeds{PairPoint(p.x0, p.y0)};
    const Box& box = p.map.domain_box();
    auto gen = block_stream(o.rng_seed, 0);
    const std::size_t extra = o.samples.value_or(kDefaultExtraSeeds);
    for (std::size_t k = 0; k < extra; ++k) {
        std::vector<double> x(box.dim()), y(box.dim());
        for (std::size_t i = 0; i < box.dim(); ++i) x[i] = uniform(gen, box[i].lo, box[i].hi);
        for (std::size_t i = 0; i < box.dim(); ++i) y[i] = uniform(gen, box[i].lo, box[i].hi);
        seeds.emplace_back(Point(std::move(x)), Point(std::move(y)));
    }
    const UniquenessReport report = uniqueness_probe(p.space, p.map, seeds, cfg, 0);
    emit(out, o, to_json(report), format_text(report));

    bool any_result = false;
    for (const auto& run : report.runs) any_result = any_result || run.result.has_value();
    if (!any_result) return kDivergence;
    return report.all_agree && report.bridges_hold ? kOk : kHypothesisViolated;
}

int cmd_list(const Options& o, std::ostream& out) {
    nlohmann::json doc = nlohmann::json::array();
    std::string text;
    for (const auto& name : builtin_names()) {
        doc.push_back({{"name", name}, {"description", std::string(builtin_description(name))}});
        text += name + "  " + std::string(builtin_description(name)) + "\n";
    }
    emit(out, o, doc, text);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coupled fixed points of mixed monotone maps on ordered metric spaces", "coupled-fp"};
    app.require_subcommand(1, 1);

    Options o;
    std::size_t samples = 0;
    app.add_option("--problem", o.problem, "builtin problem name");
    app.add_option("--config", o.config, "path to a JSON problem config");
    app.add_option("--tol", o.tol, "residual / tail-bound tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    auto* alpha = app.add_option("--alpha", "contraction parameter alpha");
    auto* beta = app.add_option("--beta", "contraction parameter beta");
    auto* samples_opt = app.add_option("--samples", samples, "number of random samples");
    app.add_option("--rng-seed", o.rng_seed, "seed for all sampling");
    app.add_option("--trace", o.trace, "write the iteration trace as CSV");
    app.add_flag("--json", o.json, "machine-readable JSON output");

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Options&, std::ostream&);
    };
    const Sub subs[] = {
        {"solve", "run the coupled iteration", cmd_solve},
        {"certify", "check (alpha, beta) on sampled comparable pairs", cmd_certify},
        {"estimate", "estimate the smallest admissible ratio beta/(1-alpha)", cmd_estimate},
        {"check-monotone", "falsification test of the mixed monotone property", cmd_check_monotone},
        {"probe-uniqueness", "solve from several seeds and compare limits", cmd_probe},
        {"list-builtins", "list the builtin problems", cmd_list},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (alpha->count() > 0) o.alpha = alpha->as<double>();
        if (beta->count() > 0) o.beta = beta->as<double>();
        if (samples_opt->count() > 0) o.samples = samples;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    for (const auto& s : subs) {
        if (!app.got_subcommand(s.name)) continue;
        try {
            return s.fn(o, out);
        } catch (const DivergenceError& e) {
            err << "divergence: " << e.what() << "\n";
            return kDivergence;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kInputError;
        }
    }
    return kInputError;
}

}  // namespace cfp::cli
