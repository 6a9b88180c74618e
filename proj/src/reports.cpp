#include "coupled_fp/reports.hpp"

#include <cstdio>
#include <sstream>

#include "coupled_fp/errors.hpp"

namespace cfp {

using nlohmann::json;

json to_json(const Point& p) { return json(p.values()); }

json to_json(const PairPoint& p) { return json::array({to_json(p.first), to_json(p.second)}); }

json to_json(const ContractionParams& p) {
    return json{{"alpha", p.alpha()},
                {"beta", p.beta()},
                {"ratio", p.ratio()},
                {"alpha_is_zero", p.alpha_is_zero()}};
}

json to_json(const SamplePair& s) {
    return json{{"a", to_json(s.a)},
                {"b", to_json(s.b)},
                {"image_distance", s.terms.image_distance},
                {"m", s.terms.m},
                {"spread", s.terms.spread}};
}

json to_json(const CertificateReport& r) {
    json j{{"sample_count", r.sample_count},
           {"directed_count", r.directed_count},
           {"violations", r.violations},
           {"worst_margin", nullptr},
           {"min_margin_pair", nullptr},
           {"params", to_json(r.params)},
           {"verdict", r.violations == 0 ? "not falsified" : "falsified"}};
    if (r.worst_margin) j["worst_margin"] = *r.worst_margin;
    if (r.min_margin_pair) j["min_margin_pair"] = to_json(*r.min_margin_pair);
    return j;
}

namespace {

Point point_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of numbers");
    std::vector<double> v;
    for (const auto& x : j) {
        if (!x.is_number()) throw InputError("expected an array of numbers");
        v.push_back(x.get<double>());
    }
    return Point(std::move(v));
}

PairPoint pair_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InputError("expected a pair [first, second]");
    return PairPoint(point_from_json(j[0]), point_from_json(j[1]));
}

}  // namespace

CertificateReport certificate_from_json(const json& doc) {
    try {
        const auto& p = doc.at("params");
        CertificateReport r(ContractionParams(p.at("alpha").get<double>(), p.at("beta").get<double>()));
        r.sample_count = doc.at("sample_count").get<std::size_t>();
        r.directed_count = doc.at("directed_count").get<std::size_t>();
        r.violations = doc.at("violations").get<std::size_t>();
        if (!doc.at("worst_margin").is_null()) r.worst_margin = doc.at("worst_margin").get<double>();
        if (const auto& s = doc.at("min_margin_pair"); !s.is_null()) {
            r.min_margin_pair = SamplePair{pair_from_json(s.at("a")), pair_from_json(s.at("b")),
                                           ContractionTerms{s.at("image_distance").get<double>(),
                                                            s.at("m").get<double>(),
                                                            s.at("spread").get<double>()}};
        }
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate report: ") + e.what());
    }
}

json to_json(const ParamEstimate& e) {
    json j{{"feasible", e.feasible},
           {"sample_count", e.sample_count},
           {"ratio", nullptr},
           {"params", nullptr},
           {"at_floor", e.at_floor}};
    if (e.feasible) {
        j["ratio"] = e.ratio;
        j["params"] = to_json(*e.params);
    }
    return j;
}

json to_json(const MonotoneReport& r) {
    json j{{"samples", r.samples},
           {"checks", r.checks},
           {"violations", r.violations},
           {"worst_violation", r.worst_violation},
           {"falsified", r.falsified()},
           {"witness", nullptr}};
    if (r.worst) {
        j["witness"] = json{
            {"argument", r.worst->argument == MonotoneWitness::Argument::first ? "first" : "second"},
            {"lower", to_json(r.worst->lower)},
            {"upper", to_json(r.worst->upper)},
            {"other", to_json(r.worst->other)}};
    }
    return j;
}

json to_json(const SolveResult& r) {
    return json{{"fixed_pair", to_json(r.fixed_pair)},
                {"iterations_used", r.iterations_used},
                {"final_residual", r.final_residual},
                {"converged", r.converged},
                {"seed_condition_held", r.seed_condition_held},
                {"components_equal", r.components_equal}};
}

json to_json(const ChainReport& r) {
    json j{{"passed", r.passed}, {"checks", r.checks}, {"failure", nullptr}, {"at", nullptr}};
    if (!r.passed) {
        j["failure"] = std::string(to_string(r.failure));
        j["at"] = r.at;
    }
    return j;
}

json to_json(const UniquenessReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs) {
        json item{{"seed", to_json(run.seed)},
                  {"seed_condition_held", run.seed_condition_held},
                  {"result", nullptr},
                  {"error", nullptr}};
        if (run.result) item["result"] = to_json(*run.result);
        if (!run.error.empty()) item["error"] = run.error;
        runs.push_back(std::move(item));
    }
    json bridges = json::array();
    for (const auto& b : r.bridges) {
        bridges.push_back(json{{"i", b.i},
                               {"j", b.j},
                               {"bridge", to_json(b.bridge)},
                               {"comparable_to_both", b.comparable_to_both}});
    }
    return json{{"runs", std::move(runs)},
                {"max_pairwise_distance", r.max_pairwise_distance},
                {"all_agree", r.all_agree},
                {"bridges", std::move(bridges)},
                {"bridges_hold", r.bridges_hold}};
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string text(const Point& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (i) out += ", ";
        out += num(p[i]);
    }
    return out + ")";
}

std::string text(const PairPoint& p) { return "[" + text(p.first) + ", " + text(p.second) + "]"; }

std::string text(const ContractionParams& p) {
    std::string out = "alpha=" + num(p.alpha()) + " beta=" + num(p.beta()) + " r=" + num(p.ratio());
    if (p.alpha_is_zero()) out += " (warning: alpha = 0)";
    return out;
}

}  // namespace

std::string format_text(const CertificateReport& r) {
    std::ostringstream out;
    out << "certificate: " << (r.violations == 0 ? "not falsified" : "FALSIFIED") << " at "
        << r.sample_count << " samples (" << r.directed_count << " directed)\n";
    out << "params: " << text(r.params) << "\n";
    out << "violations: " << r.violations << "\n";
    if (r.worst_margin) {
        out << "worst margin: " << num(*r.worst_margin) << "\n";
        out << "worst pair: a=" << text(r.min_margin_pair->a) << " b=" << text(r.min_margin_pair->b)
            << "\n";
    } else {
        out << "worst margin: none (no samples)\n";
    }
    return out.str();
}

std::string format_text(const ParamEstimate& e) {
    std::ostringstream out;
    if (!e.feasible) {
        out << "estimate: infeasible over " << e.sample_count << " samples\n";
        return out.str();
    }
    out << "estimate: minimal ratio r* = " << num(e.ratio);
    if (e.at_floor) out << " (bisection floor)";
    out << " over " << e.sample_count << " samples\n";
    out << "witness: " << text(*e.params) << "\n";
    return out.str();
}

std::string format_text(const MonotoneReport& r) {
    std::ostringstream out;
    out << "mixed monotone: " << (r.falsified() ? "FALSIFIED" : "not falsified") << " at "
        << r.samples << " samples (" << r.checks << " checks)\n";
    out << "violations: " << r.violations << "\n";
    if (r.worst) {
        out << "worst violation: " << num(r.worst_violation) << " in the "
            << (r.worst->argument == MonotoneWitness::Argument::first ? "first" : "second")
            << " argument, lower=" << text(r.worst->lower) << " upper=" << text(r.worst->upper)
            << " other=" << text(r.worst->other) << "\n";
    }
    return out.str();
}

std::string format_text(const SolveResult& r, const std::optional<ChainReport>& chain) {
    std::ostringstream out;
    out << (r.converged ? "converged" : "NOT converged") << " after " << r.iterations_used
        << " iterations\n";
    out << "fixed pair: " << text(r.fixed_pair) << "\n";
    out << "residual: " << num(r.final_residual) << "\n";
    out << "seed condition: " << (r.seed_condition_held ? "held" : "failed (empirical run)") << "\n";
    out << "components equal: " << (r.components_equal ? "yes" : "no") << "\n";
    if (chain) {
        out << "monotone chain: " << (chain->passed ? "passed" : "FAILED");
        if (!chain->passed) out << " (" << to_string(chain->failure) << " at n=" << chain->at << ")";
        out << "\n";
    }
    return out.str();
}

std::string format_text(const UniquenessReport& r) {
    std::ostringstream out;
    out << "uniqueness: " << (r.all_agree ? "all limits agree" : "limits DISAGREE or runs failed")
        << "\n";
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        const auto& run = r.runs[i];
        out << "  seed " << i << " " << text(run.seed) << ": ";
        if (run.result) {
            out << (run.result->converged ? "converged to " : "stopped at ")
                << text(run.result->fixed_pair);
            if (!run.seed_condition_held) out << " (seed condition failed)";
        } else {
            out << "error: " << run.error;
        }
        out << "\n";
    }
    out << "max pairwise distance: " << num(r.max_pairwise_distance) << "\n";
    out << "bridge elements: " << (r.bridges_hold ? "comparable to every pair" : "FAILED") << " ("
        << r.bridges.size() << " pairs)\n";
    return out.str();
}

}  // namespace cfp
