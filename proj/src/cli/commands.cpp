#include "fxcredit/cli/commands.hpp"

#include "fxcredit/cli/format.hpp"
#include "fxcredit/errors.hpp"
#include "fxcredit/model/adjustment.hpp"
#include "fxcredit/model/consistency.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fxcredit::cli {

namespace {

void report(std::ostream& err, const std::string& where, const std::string& detail) {
    err << where << ": error: " << detail << '\n';
}

int report(std::ostream& err, const InputError& e) {
    report(err, e.where(), e.detail());
    return e.code();
}

// Writes the finished table either to the output file or to `out`.
int emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out, std::ostream& err) {
    if (!path) {
        out << text;
        return exit_ok;
    }
    std::ofstream file(*path, std::ios::binary | std::ios::trunc);
    if (file)
        file << text;
    if (!file) {
        report(err, *path, "cannot write output file");
        return exit_validation;
    }
    return exit_ok;
}

std::string pair_field(const PairRecord& p) {
    return "pair " + p.id1 + "," + p.id2;
}

PairParams make_pair(const Portfolio& pf, const PairRecord& p, const FxParams& fx) {
    try {
        return {pf.borrower(p.id1).params(), pf.borrower(p.id2).params(), p.rho, fx};
    } catch (const ModelValidityError& e) {
        throw InputError(exit_model_validity, location(pf.source, p.line, pair_field(p)), e.what());
    }
}

AdjustedPair adjust_checked(const Portfolio& pf, const PairRecord& p, const PairParams& pair) {
    try {
        return adjust_pair(pair);
    } catch (const ModelValidityError& e) {
        throw InputError(exit_model_validity, location(pf.source, p.line, pair_field(p)), e.what());
    } catch (const DomainError& e) {
        throw InputError(exit_domain, location(pf.source, p.line, pair_field(p)), e.what());
    }
}

// First column of a check row that violates the (0, 0.5) / p* >= p domain.
std::optional<std::pair<std::string, std::string>> domain_violation(const AdjustedRow& r) {
    const std::pair<const char*, double> probs[] = {{"p1", r.p1}, {"p2", r.p2}, {"p1_star", r.p1_star}, {"p2_star", r.p2_star}};
    for (const auto& [name, v] : probs)
        if (!(v > 0.0 && v < 0.5))
            return std::pair{std::string(name), "probability " + format_number(v) + " outside (0, 0.5)"};
    for (const auto& [name, v] : {std::pair{"rho", r.rho}, std::pair{"rho_star", r.rho_star}})
        if (!(v >= -1.0 && v <= 1.0))
            return std::pair{std::string(name), "correlation " + format_number(v) + " outside [-1, 1]"};
    return std::nullopt;
}

} // namespace

FxParams resolve_fx(const Portfolio& portfolio, const FxOverrides& overrides) {
    const std::string where = portfolio.source + ":fx";
    const std::optional<double> tau = overrides.tau ? overrides.tau : portfolio.tau;
    if (!tau)
        throw InputError(exit_validation, where + ":tau", "fx volatility not given ([fx] tau = ... or --tau)");
    if (!(*tau >= 0.0) || !std::isfinite(*tau))
        throw InputError(exit_validation, where + ":tau", "fx volatility must be finite and >= 0");
    if (overrides.unit_mean && overrides.nu)
        throw InputError(exit_validation, where + ":nu", "--nu and --unit-mean-fx are mutually exclusive");

    double nu = 0.0;
    if (overrides.unit_mean)
        nu = fx_drift_for_unit_mean(*tau);
    else if (overrides.nu)
        nu = *overrides.nu;
    else if (portfolio.nu)
        nu = *portfolio.nu;
    if (!std::isfinite(nu))
        throw InputError(exit_validation, where + ":nu", "fx drift must be finite");
    return {nu, *tau};
}

int cmd_adjust(const AdjustOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const Portfolio pf = load_portfolio(options.portfolio);
        const FxParams fx = resolve_fx(pf, options.fx);

        std::ostringstream table;
        table << "id1,id2,p1,p2,rho,p1_star,p2_star,rho_star\n";
        for (const auto& p : pf.pairs) {
            const PairParams pair = make_pair(pf, p, fx);
            const AdjustedPair adj = adjust_checked(pf, p, pair);
            table << p.id1 << ',' << p.id2 << ',' << format_number(pair.b1().pd().value()) << ','
                  << format_number(pair.b2().pd().value()) << ',' << format_number(p.rho.value()) << ','
                  << format_number(adj.pd1_star.value()) << ',' << format_number(adj.pd2_star.value()) << ','
                  << format_number(adj.rho_star.value()) << '\n';
        }
        return emit(options.output, table.str(), out, err);
    } catch (const InputError& e) {
        return report(err, e);
    }
}

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err) {
    if (!(options.tolerance >= 0.0)) {
        report(err, "--tolerance", "must be >= 0");
        return exit_validation;
    }
    std::vector<AdjustedRow> rows;
    try {
        std::ifstream in(options.input);
        if (!in)
            throw InputError(exit_validation, options.input, "cannot open file");
        rows = parse_adjusted(in, options.input);
    } catch (const InputError& e) {
        return report(err, e);
    }

    bool any_domain = false;
    bool any_fail = false;
    std::ostringstream table;
    table << "id1,id2,residual,rho_star_gap,status\n";
    for (const auto& r : rows) {
        table << r.id1 << ',' << r.id2 << ',';
        std::optional<std::pair<std::string, std::string>> violation = domain_violation(r);
        ConsistencyCheck result{};
        if (!violation) {
            try {
                result = check_consistency(Probability(r.p1), Probability(r.p2), Probability(r.p1_star),
                                           Probability(r.p2_star), Correlation(r.rho), Correlation(r.rho_star));
            } catch (const DomainError& e) {
                const bool first = r.p1_star < r.p1;
                violation = std::pair{std::string(first ? "p1_star" : "p2_star"), std::string(e.what())};
            }
        }
        if (violation) {
            any_domain = true;
            report(err, location(options.input, r.line, violation->first), violation->second);
            table << ",,domain_error\n";
            continue;
        }
        const bool ok = std::abs(result.residual) <= options.tolerance;
        if (!ok) {
            any_fail = true;
            report(err, location(options.input, r.line, "rho_star"),
                   "consistency residual " + format_number(result.residual) + " exceeds tolerance " +
                       format_number(options.tolerance));
        }
        table << format_number(result.residual) << ',' << format_number(result.rho_star_gap) << ','
              << (ok ? "ok" : "fail") << '\n';
    }

    if (const int rc = emit(options.output, table.str(), out, err); rc != exit_ok)
        return rc;
    if (any_domain)
        return exit_domain;
    return any_fail ? exit_consistency_failure : exit_ok;
}

int cmd_curve(const CurveOptions& options, std::ostream& out, std::ostream& err) {
    try {
        CurveSpec spec;
        if (options.spec_path) {
            if (options.p || options.rho || !options.grid.empty() || options.points != 0)
                throw InputError(exit_validation, "curve", "give either a spec file or --p/--rho/--grid flags");
            std::ifstream in(*options.spec_path);
            if (!in)
                throw InputError(exit_validation, *options.spec_path, "cannot open file");
            spec = parse_curve_spec(in, *options.spec_path);
        } else {
            if (!options.p)
                throw InputError(exit_validation, "--p", "missing");
            if (!options.rho)
                throw InputError(exit_validation, "--rho", "missing");
            if (options.grid.empty() == (options.points == 0))
                throw InputError(exit_validation, "--grid", "give exactly one of --grid or --points");
            try {
                spec.p = Probability(*options.p);
            } catch (const DomainError& e) {
                throw InputError(exit_validation, "--p", e.what());
            }
            try {
                spec.rho = Correlation(*options.rho);
            } catch (const DomainError& e) {
                throw InputError(exit_validation, "--rho", e.what());
            }
            spec.grid = options.grid.empty() ? uniform_curve_grid(*options.p, options.points) : options.grid;
            validate_curve_grid(spec, "--grid");
        }

        std::ostringstream table;
        table << "p_star,rho_star\n";
        for (double g : spec.grid) {
            const Correlation rs = homogeneous_adjusted_correlation(spec.p, spec.rho, Probability(g));
            table << format_number(g) << ',' << format_number(rs.value()) << '\n';
        }
        return emit(options.output, table.str(), out, err);
    } catch (const InputError& e) {
        return report(err, e);
    } catch (const DomainError& e) {
        report(err, "curve", e.what());
        return exit_domain;
    }
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const Portfolio pf = load_portfolio(options.portfolio);
        const FxParams fx = resolve_fx(pf, options.fx);
        if (options.n < 1)
            throw InputError(exit_validation, "--n", "must be >= 1");
        if (options.steps < 1)
            throw InputError(exit_validation, "--steps", "must be >= 1");

        bool all_pass = true;
        std::ostringstream table;
        table << "id1,id2,quantity,closed_form,estimate,se,status\n";
        for (std::size_t i = 0; i < pf.pairs.size(); ++i) {
            const PairRecord& p = pf.pairs[i];
            const BorrowerRecord& b1 = pf.borrower(p.id1);
            const BorrowerRecord& b2 = pf.borrower(p.id2);
            const PairParams pair = make_pair(pf, p, fx);
            const AdjustedPair adj = adjust_checked(pf, p, pair);
            const double joint = joint_default_probability(adj);

            SimConfig cfg;
            cfg.n_samples = options.n;
            cfg.seed = options.seed + i;
            cfg.mode = options.mode;
            cfg.n_steps = options.steps;
            cfg.threads = options.threads;

            SimResult sim;
            if (options.mode == SimMode::reduced) {
                sim = simulate_reduced(pair, cfg);
            } else {
                for (const BorrowerRecord* b : {&b1, &b2})
                    if (!b->asset)
                        throw InputError(exit_validation, location(pf.source, b->line, "a0"),
                                         "gbm_path mode requires process columns a0,mu,debt,f0 for borrower '" +
                                             b->id + "'");
                if (b1.debt->f0() != b2.debt->f0())
                    throw InputError(exit_validation, location(pf.source, b2.line, "f0"),
                                     "borrowers of " + pair_field(p) + " must share the spot rate f0");
                sim = simulate_gbm_paths(*b1.asset, *b2.asset, {*b1.debt, *b2.debt}, fx, pair.corr_matrix(), cfg);
            }

            const struct {
                const char* name;
                double closed;
                double estimate;
                double se;
            } quantities[] = {
                {"pd1_star", adj.pd1_star.value(), sim.pd1_hat, standard_error(adj.pd1_star.value(), sim.n_samples)},
                {"pd2_star", adj.pd2_star.value(), sim.pd2_hat, standard_error(adj.pd2_star.value(), sim.n_samples)},
                {"rho_star", adj.rho_star.value(), sim.rho_hat,
                 correlation_standard_error(adj.rho_star.value(), sim.n_samples)},
                {"joint_default", joint, sim.joint_default_hat, standard_error(joint, sim.n_samples)},
            };
            for (const auto& q : quantities) {
                const bool pass = std::abs(q.estimate - q.closed) <= 3.0 * q.se;
                all_pass = all_pass && pass;
                table << p.id1 << ',' << p.id2 << ',' << q.name << ',' << format_number(q.closed) << ','
                      << format_number(q.estimate) << ',' << format_number(q.se) << ',' << (pass ? "PASS" : "FAIL")
                      << '\n';
            }
        }
        if (const int rc = emit(options.output, table.str(), out, err); rc != exit_ok)
            return rc;
        return all_pass ? exit_ok : exit_consistency_failure;
    } catch (const InputError& e) {
        return report(err, e);
    } catch (const ModelValidityError& e) {
        report(err, options.portfolio, e.what());
        return exit_model_validity;
    } catch (const DomainError& e) {
        report(err, options.portfolio, e.what());
        return exit_domain;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exchange-rate risk adjustment of PDs and asset correlations"};
    app.name("fxcredit");
    app.require_subcommand(1);

    double nu = 0.0, tau = 0.0;
    auto add_fx = [&](CLI::App* sub, FxOverrides&) {
        auto* nu_opt = sub->add_option("--nu", nu, "Mean of the one-year log FX change (default: [fx] nu, else 0)");
        sub->add_option("--tau", tau, "Volatility of the one-year log FX change (overrides [fx] tau)");
        sub->add_flag("--unit-mean-fx", "Set nu = -tau^2/2 so that E[F(1)/F(0)] = 1")->excludes(nu_opt);
    };
    auto collect_fx = [&](CLI::App* sub, FxOverrides& fx) {
        if (sub->get_option("--nu")->count() > 0)
            fx.nu = nu;
        if (sub->get_option("--tau")->count() > 0)
            fx.tau = tau;
        fx.unit_mean = sub->get_option("--unit-mean-fx")->count() > 0;
    };

    std::string output;

    AdjustOptions adjust;
    auto* adjust_cmd = app.add_subcommand("adjust", "Adjust PDs and asset correlations for exchange-rate risk");
    adjust_cmd->add_option("portfolio", adjust.portfolio, "Portfolio file")->required();
    adjust_cmd->add_option("-o,--output", output, "Output CSV (default: stdout)");
    add_fx(adjust_cmd, adjust.fx);

    CheckOptions check;
    auto* check_cmd = app.add_subcommand("check", "Check adjusted parameters against the consistency condition");
    check_cmd->add_option("adjusted", check.input, "CSV produced by `adjust`")->required();
    check_cmd->add_option("--tolerance", check.tolerance, "Maximum |residual|")->capture_default_str();
    check_cmd->add_option("-o,--output", output, "Output CSV (default: stdout)");

    CurveOptions curve;
    std::string spec_path, grid_text;
    double curve_p = 0.0, curve_rho = 0.0;
    auto* curve_cmd = app.add_subcommand("curve", "Adjusted correlation as a function of adjusted PD (homogeneous pair)");
    curve_cmd->add_option("spec", spec_path, "Curve spec file (p=, rho=, grid= or points=)");
    curve_cmd->add_option("--p", curve_p, "Original PD");
    curve_cmd->add_option("--rho", curve_rho, "Original asset correlation");
    curve_cmd->add_option("--grid", grid_text, "Comma-separated adjusted PDs in (p, 0.5)");
    curve_cmd->add_option("--points", curve.points, "Uniform grid size in (p, 0.5)");
    curve_cmd->add_option("-o,--output", output, "Output CSV (default: stdout)");

    SimulateOptions sim;
    std::string mode = "reduced";
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of the closed forms");
    sim_cmd->add_option("portfolio", sim.portfolio, "Portfolio file")->required();
    sim_cmd->add_option("--n", sim.n, "Samples per pair")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Base seed; pair i uses seed + i")->capture_default_str();
    sim_cmd->add_option("--mode", mode, "reduced or gbm_path")
        ->check(CLI::IsMember({"reduced", "gbm_path"}))
        ->capture_default_str();
    sim_cmd->add_option("--steps", sim.steps, "Time steps per path (gbm_path)")->capture_default_str();
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")->capture_default_str();
    sim_cmd->add_option("-o,--output", output, "Output CSV (default: stdout)");
    add_fx(sim_cmd, sim.fx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        err << "fxcredit: error: " << e.what() << '\n';
        return exit_validation;
    }

    auto out_path = [&](CLI::App* sub) -> std::optional<std::string> {
        if (sub->get_option("--output")->count() > 0)
            return output;
        return std::nullopt;
    };

    if (adjust_cmd->parsed()) {
        collect_fx(adjust_cmd, adjust.fx);
        adjust.output = out_path(adjust_cmd);
        return cmd_adjust(adjust, out, err);
    }
    if (check_cmd->parsed()) {
        check.output = out_path(check_cmd);
        return cmd_check(check, out, err);
    }
    if (curve_cmd->parsed()) {
        if (!spec_path.empty())
            curve.spec_path = spec_path;
        if (curve_cmd->get_option("--p")->count() > 0)
            curve.p = curve_p;
        if (curve_cmd->get_option("--rho")->count() > 0)
            curve.rho = curve_rho;
        if (!grid_text.empty()) {
            for (const auto& f : split_fields(grid_text)) {
                double v = 0.0;
                if (!parse_double(f, v)) {
                    report(err, "--grid", "not a finite number: '" + f + "'");
                    return exit_validation;
                }
                curve.grid.push_back(v);
            }
        }
        curve.output = out_path(curve_cmd);
        return cmd_curve(curve, out, err);
    }
    collect_fx(sim_cmd, sim.fx);
    sim.mode = mode == "gbm_path" ? SimMode::gbm_path : SimMode::reduced;
    sim.output = out_path(sim_cmd);
    return cmd_simulate(sim, out, err);
}

} // namespace fxcredit::cli
