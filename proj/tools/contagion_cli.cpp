// Command-line driver: runs one computation and writes a CSV plus a JSON sidecar.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "contagion/analysis.hpp"
#include "contagion/heat_potential.hpp"
#include "contagion/kernels.hpp"
#include "contagion/mckv_solver.hpp"
#include "contagion/particle_oracle.hpp"
#include "contagion/perturbation.hpp"

using namespace contagion;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBlowUp = 2;

struct RunConfig {
    double alpha = 0.0;
    double z = 0.5;
    double t_end = 1.0;
    int steps = 1000;
    long particles = 100000;
    std::uint64_t seed = 1;
    int x_points = 400;
    std::optional<double> t_slice;
    std::string output;
    std::string rescale;  // number or "volterra"
    double g_max = 1e6;
    double recovery = 0.9;
    double sigma = 0.08;
    std::optional<double> interbank_fraction;
    std::string preset = "EU";
};

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw InputError("cannot open output file: " + path);
        out_.precision(17);
    }
    template <class... T>
    void row(const T&... cells) {
        int i = 0;
        ((out_ << (i++ ? "," : "") << cells), ...);
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) throw InputError("failed writing output file");
    }

private:
    std::ofstream out_;
};

json config_json(const RunConfig& c, const std::string& command) {
    json j{{"command", command}, {"alpha", c.alpha}, {"z", c.z}, {"t_end", c.t_end}, {"steps", c.steps},
           {"particles", c.particles}, {"seed", c.seed}, {"x_points", c.x_points},
           {"g_max", c.g_max}, {"output", c.output}, {"version", kVersion}, {"workers", 1}};
    if (c.t_slice) j["t_slice"] = *c.t_slice;
    if (!c.rescale.empty()) j["rescale"] = c.rescale;
    return j;
}

void write_sidecar(const RunConfig& c, json meta) {
    std::ofstream out(c.output + ".meta.json", std::ios::binary);
    if (!out) throw InputError("cannot open metadata file: " + c.output + ".meta.json");
    out << meta.dump(2) << '\n';
    if (!out) throw InputError("failed writing metadata file");
}

json blow_up_json(const SolutionPath& p) {
    if (!p.blow_up) return nullptr;
    return {{"node", p.blow_up->node}, {"time", p.blow_up->time},
            {"cause", to_string(p.blow_up->cause)}, {"last_g", p.blow_up->last_g}};
}

ProblemSpec problem_of(const RunConfig& c) {
    ProblemSpec spec{c.alpha, c.z, GridSpec(c.t_end, c.steps)};
    spec.validate();
    return spec;
}

SolverOptions options_of(const RunConfig& c) {
    SolverOptions o;
    o.g_max = c.g_max;
    return o;
}

int cmd_solve(const RunConfig& c, json& meta) {
    const auto path = solve(problem_of(c), options_of(c));
    CsvWriter csv(c.output);
    csv.row("t", "nu", "g", "L");
    for (int n = 1; n <= path.last_node(); ++n) csv.row(path.grid.t(n), path.nu[n], path.g[n], path.L[n]);
    csv.close();
    meta["blow_up"] = blow_up_json(path);
    return path.blow_up ? kExitBlowUp : kExitOk;
}

int cmd_perturb(const RunConfig& c, json& meta) {
    const GridSpec grid(c.t_end, c.steps);
    std::optional<double> target;
    if (c.rescale == "volterra") {
        const auto path = solve(problem_of(c), options_of(c));
        if (path.blow_up) throw InputError("rescale target unavailable: the feedback solve blew up");
        target = path.L[c.steps];
    } else if (!c.rescale.empty()) {
        try {
            target = std::stod(c.rescale);
        } catch (const std::exception&) {
            throw InputError("--rescale expects a mass or 'volterra'");
        }
    }
    const auto s = assemble(c.alpha, grid, c.z, target);
    const Eigen::VectorXd nu = s.nu0 + c.alpha * s.nu1;
    const Eigen::VectorXd L = cumulative_trapezoid(s.g_assembled, grid.delta);
    CsvWriter csv(c.output);
    csv.row("t", "nu", "g", "L");
    for (int n = 1; n <= grid.n_steps; ++n) csv.row(grid.t(n), nu[n], s.g_assembled[n], L[n]);
    csv.close();
    meta["rescaled"] = s.rescaled;
    meta["scale"] = s.scale;
    if (target) meta["target_mass"] = *target;
    return kExitOk;
}

ParticleConfig particle_config(const RunConfig& c) {
    ParticleConfig p;
    p.n_particles = c.particles;
    p.n_steps = c.steps;
    p.seed = c.seed;
    p.alpha = c.alpha;
    p.z = c.z;
    p.t_end = c.t_end;
    return p;
}

int cmd_particles(const RunConfig& c, json&) {
    const auto run = simulate(particle_config(c));
    CsvWriter csv(c.output);
    csv.row("t", "L_hat", "stderr");
    for (int k = 1; k <= c.steps; ++k) csv.row(run.t[k], run.L_hat[k], run.stderr_[k]);
    csv.close();
    return kExitOk;
}

int cmd_density(const RunConfig& c, json& meta) {
    const auto spec = problem_of(c);
    const auto path = solve(spec, options_of(c));
    const double ts = c.t_slice.value_or(c.t_end);
    const int node = static_cast<int>(std::lround(ts / spec.grid.delta));
    if (node < 1 || node > spec.grid.n_steps) throw InputError("--t-slice must lie in (0, t_end]");
    meta["blow_up"] = blow_up_json(path);
    meta["t_node"] = node;
    if (node > path.last_node()) {
        CsvWriter csv(c.output);
        csv.row("x", "p");
        csv.close();
        return kExitBlowUp;
    }
    const Eigen::VectorXd x = default_x_grid(c.z, c.t_end, c.x_points);
    const Eigen::VectorXd p = density_slice(path, spec, x, node);
    CsvWriter csv(c.output);
    csv.row("x", "p");
    for (Eigen::Index i = 0; i < x.size(); ++i) csv.row(x[i], p[i]);
    csv.close();
    return path.blow_up ? kExitBlowUp : kExitOk;
}

int cmd_moments(const RunConfig& c, json& meta) {
    const auto path = solve(problem_of(c), options_of(c));
    meta["blow_up"] = blow_up_json(path);
    if (path.blow_up) {
        CsvWriter csv(c.output);
        csv.row("alpha", "T", "mass", "cond_mean", "cond_var");
        csv.close();
        return kExitBlowUp;
    }
    const auto m = conditional_moments(path.g, path.grid, c.alpha);
    CsvWriter csv(c.output);
    csv.row("alpha", "T", "mass", "cond_mean", "cond_var");
    csv.row(m.alpha, m.horizon, m.total_mass, m.cond_mean, m.cond_var);
    csv.close();
    return kExitOk;
}

int cmd_convergence(const RunConfig& c, json& meta) {
    ProblemSpec spec = problem_of(c);
    SolutionPath paths[3] = {solve(spec, options_of(c)),
                             solve({c.alpha, c.z, GridSpec(c.t_end, 2 * c.steps)}, options_of(c)),
                             solve({c.alpha, c.z, GridSpec(c.t_end, 4 * c.steps)}, options_of(c))};
    for (const auto& p : paths) {
        if (p.blow_up) {
            meta["blow_up"] = blow_up_json(p);
            CsvWriter csv(c.output);
            csv.row("alpha", "N", "diff_g_N", "diff_g_2N", "order_g", "order_L");
            csv.close();
            return kExitBlowUp;
        }
    }
    const double d1 = nested_difference(paths[0].g, paths[1].g);
    const double d2 = nested_difference(paths[1].g, paths[2].g);
    CsvWriter csv(c.output);
    csv.row("alpha", "N", "diff_g_N", "diff_g_2N", "order_g", "order_L");
    csv.row(c.alpha, c.steps, d1, d2, convergence_order(paths[0], paths[1], paths[2]),
            convergence_order(paths[0].L, paths[1].L, paths[2].L));
    csv.close();
    return kExitOk;
}

int cmd_compare(const RunConfig& c, json& meta) {
    const auto path = solve(problem_of(c), options_of(c));
    const auto run = simulate(particle_config(c));
    meta["blow_up"] = blow_up_json(path);
    CsvWriter csv(c.output);
    csv.row("t", "L_volterra", "L_hat", "stderr");
    double worst = 0.0;
    for (int k = 1; k <= path.last_node(); ++k) {
        csv.row(path.grid.t(k), path.L[k], run.L_hat[k], run.stderr_[k]);
        if (run.stderr_[k] > 0.0) worst = std::max(worst, std::abs(path.L[k] - run.L_hat[k]) / run.stderr_[k]);
    }
    csv.close();
    meta["max_gap_in_stderr"] = worst;
    meta["within_3_stderr"] = worst <= 3.0;
    return path.blow_up ? kExitBlowUp : kExitOk;
}

int cmd_calibrate(const RunConfig& c, json& meta) {
    const double f = c.interbank_fraction.value_or(interbank_fraction_preset(c.preset));
    const double alpha = alpha_from_bank_params({c.recovery, c.sigma, f});
    CsvWriter csv(c.output);
    csv.row("recovery", "sigma", "interbank_fraction", "alpha");
    csv.row(c.recovery, c.sigma, f, alpha);
    csv.close();
    meta["interbank_fraction"] = f;
    return kExitOk;
}

int cmd_lemma1(const RunConfig& c, json&) {
    const int quad_n = 4096;
    const double t = c.t_end;
    CsvWriter csv(c.output);
    csv.row("pair", "t", "quad_n", "lhs", "form1", "form2");
    auto emit = [&](const char* name, const Kernel2& xi, const Weight& nu) {
        csv.row(name, t, quad_n, lemma1_lhs(xi, nu, t, quad_n), lemma1_rhs_form1(xi, nu, t, quad_n),
                lemma1_rhs_form2(xi, nu, t, quad_n));
    };
    emit("exp_linear", [](double a, double b) { return std::exp(-(a - b)); }, [](double s) { return s; });
    emit("rational_damped_sine", [](double a, double b) { return 1.0 / (1.0 + (a - b) * (a - b)); },
         [](double s) { return std::sin(s) * std::exp(-s); });
    csv.close();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loss function of a mean-field default-contagion model"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1, 1);

    RunConfig c;
    app.add_option("--alpha", c.alpha, "interaction strength")->check(CLI::NonNegativeNumber);
    app.add_option("--z", c.z, "initial distance to default")->check(CLI::PositiveNumber);
    app.add_option("--t-end", c.t_end, "time horizon")->check(CLI::PositiveNumber);
    app.add_option("--steps", c.steps, "number of time steps")->check(CLI::Range(2, 100000000));
    app.add_option("--particles", c.particles, "particle count")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--x-points", c.x_points, "points of the density grid")->check(CLI::Range(2, 10000000));
    app.add_option("--t-slice", c.t_slice, "time of the density slice");
    app.add_option("--output", c.output, "output CSV path")->required();
    app.add_option("--rescale", c.rescale, "target mass for the first-order term, or 'volterra'");
    app.add_option("--g-max", c.g_max, "loss-rate threshold for blow-up")->check(CLI::PositiveNumber);
    app.add_option("--recovery", c.recovery, "recovery rate R");
    app.add_option("--sigma", c.sigma, "asset volatility");
    app.add_option("--interbank-fraction", c.interbank_fraction, "interbank share of liabilities");
    app.add_option("--preset", c.preset, "banking system preset: EU, Canada, US");

    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, json&);
    };
    const Command commands[] = {
        {"solve", "solve the coupled system", cmd_solve},
        {"perturb", "first-order expansion in alpha", cmd_perturb},
        {"particles", "particle-system estimate", cmd_particles},
        {"density", "transition density at one time", cmd_density},
        {"moments", "conditional default-time moments", cmd_moments},
        {"convergence", "self-convergence order from N, 2N, 4N", cmd_convergence},
        {"compare", "feedback solver against particles", cmd_compare},
        {"calibrate-alpha", "alpha from banking parameters", cmd_calibrate},
        {"lemma1-check", "three evaluations of the derivative identity", cmd_lemma1},
    };
    for (const auto& cmd : commands) app.add_subcommand(cmd.name, cmd.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    json meta = config_json(c, command);
    const auto start = std::chrono::steady_clock::now();
    int status = kExitInput;
    try {
        for (const auto& cmd : commands)
            if (command == cmd.name) status = cmd.fn(c, meta);
        meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        meta["exit_status"] = status;
        write_sidecar(c, meta);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    if (status == kExitBlowUp && meta.contains("blow_up") && !meta["blow_up"].is_null())
        std::cerr << "blow-up at t=" << meta["blow_up"]["time"].get<double>() << " ("
                  << meta["blow_up"]["cause"].get<std::string>() << ")\n";
    return status;
}
