#include "blowup/cli.hpp"

#include "blowup/asymptotics.hpp"
#include "blowup/errors.hpp"
#include "blowup/quad.hpp"
#include "blowup/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace blowup::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string optional_num(const std::optional<double>& v) {
    return v ? num(*v) : std::string();
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

double norm_for(const RunConfig& config) {
    const ProblemParams& params = config.params;
    if (config.numeric_norm) {
        return lq_norm_numeric(build_profile(params.p, config.u_max, config.n_points), params.q);
    }
    return lq_norm_closed(params.p, params.q);
}

// A root may only be written out if it still satisfies the scalar equation.
void recheck(const SolutionSet& set, const ProblemParams& params, double tol) {
    const double allowed = set.kind == SolutionKind::Tangent ? std::max(tol, kTangentBand) : tol;
    for (double t : set.roots) {
        const double residual = relative_residual(t, params, set.rhs);
        if (!(residual <= allowed)) {
            throw AccuracyError("root t = " + num(t) + " fails its residual re-check", t, residual);
        }
    }
}

std::vector<double> sweep_values(const Sweep& sweep) {
    if (!(sweep.lambda_min > 0.0 && sweep.lambda_max >= sweep.lambda_min) || sweep.n == 0) {
        throw DomainError("the sweep needs 0 < lambda-min <= lambda-max and n >= 1");
    }
    std::vector<double> values(sweep.n);
    for (std::size_t i = 0; i < sweep.n; ++i) {
        const double f = sweep.n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(sweep.n - 1);
        values[i] = sweep.log_spaced
                        ? sweep.lambda_min * std::pow(sweep.lambda_max / sweep.lambda_min, f)
                        : sweep.lambda_min + (sweep.lambda_max - sweep.lambda_min) * f;
    }
    values.back() = sweep.lambda_max;
    return values;
}

void emit_profile(const RunConfig& config, std::ostream& os) {
    const double p = config.params.p;
    const Profile profile = build_profile(p, config.u_max, config.n_points);
    const double lp = quad::lp_constant(p).value;
    struct NormRow {
        double q, closed;
        std::optional<double> numeric;
    };
    std::vector<NormRow> norms;
    for (double q : config.q_values) {
        NormRow row{q, profile.norm(q), std::nullopt};
        if (config.numeric_norm) {
            row.numeric = lq_norm_numeric(profile, q);
        }
        norms.push_back(row);
    }

    if (config.format == Format::json) {
        json j;
        j["p"] = p;
        j["mu"] = profile.mu();
        j["L_p"] = lp;
        j["boundary_constant"] = profile.boundary_constant();
        j["boundary_gap"] = profile.boundary_gap();
        j["norms"] = json::array();
        for (const NormRow& row : norms) {
            j["norms"].push_back({{"q", row.q}, {"closed", row.closed}, {"numeric", optional_json(row.numeric)}});
        }
        json u = json::array();
        json x = json::array();
        for (const TableRow& row : profile.table()) {
            u.push_back(row.u);
            x.push_back(row.x);
        }
        j["table"] = {{"u", u}, {"x", x}};
        os << j.dump(2) << '\n';
        return;
    }
    os << "# p=" << num(p) << '\n'
       << "# mu=" << num(profile.mu()) << '\n'
       << "# L_p=" << num(lp) << '\n'
       << "# boundary_constant=" << num(profile.boundary_constant()) << '\n'
       << "# boundary_gap=" << num(profile.boundary_gap()) << '\n';
    for (const NormRow& row : norms) {
        os << "# norm_q[" << num(row.q) << "]=" << num(row.closed) << '\n';
        if (row.numeric) {
            os << "# norm_q_numeric[" << num(row.q) << "]=" << num(*row.numeric) << '\n';
        }
    }
    os << "u,x\n";
    for (const TableRow& row : profile.table()) {
        os << num(row.u) << ',' << num(row.x) << '\n';
    }
}

std::string csv_row(double lambda, const SolutionSet& set) {
    std::string row = num(lambda) + ',' + std::string(to_string(set.kind)) + ',';
    row += set.roots.empty() ? "" : num(set.roots[0]);
    row += ',';
    row += set.roots.size() > 1 ? num(set.roots[1]) : "";
    row += ',';
    row += set.fold ? num(set.fold->t0) : "";
    row += ',';
    row += set.fold ? num(set.fold->lambda0) : "";
    return row;
}

json solution_json(const SolutionSet& set, const ProblemParams& params) {
    json j;
    j["kind"] = std::string(to_string(set.kind));
    j["regime"] = std::string(to_string(set.regime));
    j["rhs"] = set.rhs;
    j["roots"] = set.roots;
    json residuals = json::array();
    for (double t : set.roots) {
        residuals.push_back(relative_residual(t, params, set.rhs));
    }
    j["residuals"] = residuals;
    j["fold"] = set.fold ? json{{"t0", set.fold->t0}, {"lambda0", set.fold->lambda0}} : json(nullptr);
    j["degenerate_continuum"] = set.degenerate_continuum;
    return j;
}

void emit_solve(const RunConfig& config, std::ostream& os) {
    const ProblemParams& params = config.params;
    params.validate();
    const double norm = norm_for(config);
    const SolutionSet set = solve_scalar(params, norm, config.tol);
    recheck(set, params, config.tol);
    if (config.format == Format::csv) {
        os << "lambda,kind,t1,t2,t0,lambda0\n" << csv_row(params.lambda, set) << '\n';
        return;
    }
    json j = solution_json(set, params);
    j["params"] = {{"p", params.p}, {"q", params.q}, {"r", params.r}, {"b", params.b}, {"lambda", params.lambda}};
    j["norm_q"] = norm;
    j["norm_source"] = config.numeric_norm ? "numeric" : "closed";
    j["tol"] = config.tol;
    os << j.dump(2) << '\n';
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    const unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (std::thread& t : pool) {
        t.join();
    }
    // Report the failure at the smallest index so the outcome does not depend on scheduling.
    for (const std::exception_ptr& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void emit_bifurcate(const RunConfig& config, std::ostream& os) {
    if (!config.sweep) {
        throw DomainError("bifurcate needs a lambda sweep");
    }
    const std::vector<double> lambdas = sweep_values(*config.sweep);
    ProblemParams base = config.params;
    base.lambda = lambdas.front();
    base.validate();
    RunConfig norm_config = config;
    norm_config.params = base;
    const double norm = norm_for(norm_config);

    std::vector<SolutionSet> sets(lambdas.size());
    parallel_for(lambdas.size(), config.threads, [&](std::size_t i) {
        ProblemParams params = base;
        params.lambda = lambdas[i];
        sets[i] = solve_scalar(params, norm, config.tol);
        recheck(sets[i], params, config.tol);
    });

    std::optional<FoldPoint> fold;
    if (classify(base) == Regime::Super && base.b > 0.0) {
        fold = critical_point(base, norm);
    }
    if (config.format == Format::json) {
        json j;
        j["regime"] = std::string(to_string(classify(base)));
        j["norm_q"] = norm;
        j["fold"] = fold ? json{{"t0", fold->t0}, {"lambda0", fold->lambda0}} : json(nullptr);
        j["rows"] = json::array();
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            ProblemParams params = base;
            params.lambda = lambdas[i];
            json row = solution_json(sets[i], params);
            row["lambda"] = lambdas[i];
            j["rows"].push_back(row);
        }
        os << j.dump(2) << '\n';
        return;
    }
    if (fold) {
        os << "# lambda0=" << num(fold->lambda0) << '\n' << "# t0=" << num(fold->t0) << '\n';
    }
    os << "lambda,kind,t1,t2,t0,lambda0\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        os << csv_row(lambdas[i], sets[i]) << '\n';
    }
}

void emit_asympt(const RunConfig& config, std::ostream& os) {
    const Sweep sweep = config.sweep.value_or(Sweep{1e2, 1e6, 0, true});
    if (!(sweep.lambda_min > 0.0 && sweep.lambda_max >= sweep.lambda_min)) {
        throw DomainError("the decade grid needs 0 < lambda-min <= lambda-max");
    }
    std::vector<double> lambdas;
    for (double lambda = sweep.lambda_min; lambda <= sweep.lambda_max * (1.0 + 1e-12); lambda *= 10.0) {
        lambdas.push_back(lambda);
    }
    ProblemParams base = config.params;
    base.lambda = lambdas.front();
    base.validate();
    RunConfig norm_config = config;
    norm_config.params = base;
    const double norm = norm_for(norm_config);
    const FoldPoint fold = critical_point(base, norm);

    std::vector<AsymptoticExpansion> rows;
    for (double lambda : lambdas) {
        ProblemParams params = base;
        params.lambda = lambda;
        const SolutionSet set = solve_scalar(params, norm, config.tol);
        recheck(set, params, config.tol);
        AsymptoticExpansion lower = asymptotic_lower(params, norm);
        AsymptoticExpansion upper = asymptotic_upper(params, norm);
        if (!set.roots.empty()) {
            lower.attach(set.roots.front());
            upper.attach(set.roots.back());
        }
        rows.push_back(lower);
        rows.push_back(upper);
    }

    if (config.format == Format::json) {
        json j;
        j["fold"] = {{"t0", fold.t0}, {"lambda0", fold.lambda0}};
        j["norm_q"] = norm;
        j["rows"] = json::array();
        for (const AsymptoticExpansion& e : rows) {
            j["rows"].push_back({{"lambda", e.lambda},
                                 {"branch", std::string(to_string(e.branch))},
                                 {"leading", e.leading},
                                 {"correction", e.correction},
                                 {"m_pq", e.m_pq},
                                 {"numeric", optional_json(e.numeric)},
                                 {"remainder_ratio", optional_json(e.remainder_ratio)},
                                 {"R", optional_json(e.R)},
                                 {"eta", optional_json(e.eta)}});
        }
        os << j.dump(2) << '\n';
        return;
    }
    os << "# lambda0=" << num(fold.lambda0) << '\n' << "lambda,branch,leading,correction,numeric,remainder_ratio\n";
    for (const AsymptoticExpansion& e : rows) {
        os << num(e.lambda) << ',' << to_string(e.branch) << ',' << num(e.leading) << ',' << num(e.correction)
           << ',' << optional_num(e.numeric) << ',' << optional_num(e.remainder_ratio) << '\n';
    }
}

bool emit_verify(const RunConfig& config, std::ostream& os) {
    const std::vector<Check> checks = run_verification();
    const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    if (config.format == Format::json) {
        json j = json::array();
        for (const Check& c : checks) {
            j.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}});
        }
        os << j.dump(2) << '\n';
    } else {
        os << "name,pass,value,threshold\n";
        for (const Check& c : checks) {
            os << c.name << ',' << (c.pass ? "true" : "false") << ',' << num(c.value) << ',' << num(c.threshold)
               << '\n';
        }
    }
    return all;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::ostringstream buffer;
    bool checks_passed = true;
    try {
        if (!(config.tol > 0.0)) {
            throw DomainError("tol must be positive");
        }
        if (config.sweep.has_value() != (config.subcommand == Subcommand::bifurcate) &&
            config.subcommand != Subcommand::asympt) {
            throw DomainError("a lambda sweep is only meaningful for bifurcate");
        }
        switch (config.subcommand) {
        case Subcommand::profile:
            emit_profile(config, buffer);
            break;
        case Subcommand::solve:
            emit_solve(config, buffer);
            break;
        case Subcommand::bifurcate:
            emit_bifurcate(config, buffer);
            break;
        case Subcommand::asympt:
            emit_asympt(config, buffer);
            break;
        case Subcommand::verify:
            checks_passed = emit_verify(config, buffer);
            break;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const RegimeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const AccuracyError& e) {
        err << "numerical failure: " << e.what() << " (best estimate " << num(e.best_estimate()) << ", error "
            << num(e.error_estimate()) << ")\n";
        return kExitNumerical;
    }

    if (config.output_path) {
        std::ofstream file(*config.output_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << *config.output_path << " for writing\n";
            return kExitInvalid;
        }
        file << buffer.str();
    } else {
        out << buffer.str();
    }
    if (!checks_passed) {
        err << "verification failed\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blow-up profiles and solution sets for (||u||_q^q + b)^r u'' = lambda u^p on (-1, 1)"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format;
    std::string output;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t n = 41;
    bool linear = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", output, "Write to PATH instead of standard output");
        sub->add_option("--tol", config.tol, "Relative root tolerance")->capture_default_str();
        sub->add_flag("--numeric-norm", config.numeric_norm, "Use the quadrature norm of U_p instead of the closed form");
        sub->add_option("--points", config.n_points, "Profile table size")->capture_default_str();
        sub->add_option("--u-max", config.u_max, "Profile table cutoff");
    };
    auto equation = [&](CLI::App* sub, bool with_lambda) {
        sub->add_option("--p", config.params.p, "Exponent p > 1")->required();
        sub->add_option("--q", config.params.q, "Norm exponent, 0 < q < (p-1)/2")->required();
        sub->add_option("--r", config.params.r, "Power r > 0")->required();
        sub->add_option("--b", config.params.b, "Offset b >= 0")->required();
        if (with_lambda) {
            sub->add_option("--lambda", config.params.lambda, "lambda > 0")->required();
        }
    };

    CLI::App* profile = app.add_subcommand("profile", "Tabulate U_p and report mu_p, L_p and norms");
    profile->add_option("--p", config.params.p, "Exponent p > 1")->required();
    profile->add_option("--q", config.q_values, "Report ||U_p||_q for these q");
    common(profile);

    CLI::App* solve = app.add_subcommand("solve", "Classify and solve the scalar equation at one lambda");
    equation(solve, true);
    common(solve);

    CLI::App* bifurcate = app.add_subcommand("bifurcate", "Sweep lambda and classify the solution set");
    equation(bifurcate, false);
    bifurcate->add_option("--lambda-min", lambda_min, "Smallest lambda")->required();
    bifurcate->add_option("--lambda-max", lambda_max, "Largest lambda")->required();
    bifurcate->add_option("--n", n, "Number of lambda values")->capture_default_str();
    bifurcate->add_flag("--linear", linear, "Linear instead of logarithmic spacing");
    bifurcate->add_option("--threads", config.threads, "Worker threads (0: all cores)");
    common(bifurcate);

    CLI::App* asympt = app.add_subcommand("asympt", "Compare both branches with their large-lambda expansions");
    equation(asympt, false);
    lambda_min = 1e2;
    lambda_max = 1e6;
    asympt->add_option("--lambda-min", lambda_min, "First decade")->capture_default_str();
    asympt->add_option("--lambda-max", lambda_max, "Last decade")->capture_default_str();
    common(asympt);

    CLI::App* verify = app.add_subcommand("verify", "Run the invariant checks of every module");
    common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    if (profile->parsed()) {
        config.subcommand = Subcommand::profile;
    } else if (solve->parsed()) {
        config.subcommand = Subcommand::solve;
    } else if (bifurcate->parsed()) {
        config.subcommand = Subcommand::bifurcate;
        config.sweep = Sweep{lambda_min, lambda_max, n, !linear};
    } else if (asympt->parsed()) {
        config.subcommand = Subcommand::asympt;
        config.sweep = Sweep{lambda_min, lambda_max, 0, true};
    } else {
        config.subcommand = Subcommand::verify;
    }
    if (format.empty()) {
        config.format = config.subcommand == Subcommand::solve ? Format::json : Format::csv;
    } else {
        config.format = format == "json" ? Format::json : Format::csv;
    }
    if (!output.empty()) {
        config.output_path = output;
    }
    return run(config, out, err);
}

} // namespace blowup::cli
