#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mintau/harness.hpp"
#include "mintau/report.hpp"

namespace fs = std::filesystem;
using namespace mintau;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCertificationFailure = 1;
constexpr int kExitConfigError = 2;

struct Session {
    std::string config_path;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;

    ProblemConfig load() const {
        ProblemConfig cfg = load_problem_config(config_path);
        if (seed_set) cfg.seed = seed;
        fs::create_directories(output_dir);
        return cfg;
    }
    std::string out(const std::string& name) const {
        return (fs::path(output_dir) / name).string();
    }
};

int worst_exit(int a, int b) { return std::max(a, b); }

int emit_report(const Session& s, const CertificationReport& rep, const std::string& stem) {
    std::cout << rep.to_text();
    write_text_file(s.out(stem + ".csv"), rep.to_csv());
    write_text_file(s.out(stem + ".txt"), rep.to_text());
    return rep.pass ? kExitPass : kExitCertificationFailure;
}

int cmd_validate(const Session& s) {
    ProblemConfig cfg = s.load();
    ValidationBundle b = run_validate(cfg);
    std::cout << b.to_text();
    write_text_file(s.out("validate.txt"), b.to_text());
    write_text_file(s.out("validate.json"), b.to_json());
    return b.pass ? kExitPass : kExitCertificationFailure;
}

int cmd_simulate(const Session& s, const std::string& history, const std::string& control,
                 double t_end) {
    ProblemConfig cfg = s.load();
    const HistoryPath& x0 = cfg.history(history);
    ControlSignal u =
        parse_control_spec(control, static_cast<int>(cfg.dynamics.controls.size()));
    double horizon = t_end > 0.0 ? t_end : cfg.grids.horizon;
    Trajectory traj = integrate(x0, u, cfg.dynamics, horizon, cfg.dt());
    std::string csv = traj.to_csv(cfg.target);
    write_text_file(s.out("trajectory_" + history + ".csv"), csv);
    if (auto theta = hitting_time(traj, cfg.target, cfg.tol_theta()))
        std::cout << "hit at theta = " << fmt12(*theta) << "\n";
    else
        std::cout << "no hit within t_end = " << fmt12(horizon) << "\n";
    return kExitPass;
}

int cmd_steer(const Session& s, const std::string& history) {
    ProblemConfig cfg = s.load();
    PipelineState st = run_pipeline(cfg);
    const HistoryPath& x0 = cfg.history(history);
    double d0 = cfg.target.distance(x0.endpoint());
    SteeringResult r = steer(x0, cfg.dynamics, cfg.target, st.params);
    write_text_file(s.out("steering_" + history + ".csv"), r.log.to_csv());
    double budget = st.params.C_bound * d0;
    std::cout << "steer " << history << ": total_time = " << fmt12(r.total_time)
              << ", bound C*d0 = " << fmt12(budget) << ", iterations = "
              << r.log.steps.size() << ", final distance = " << fmt12(r.final_dist) << "\n"
              << "bound verdict: " << (r.total_time <= budget * (1.0 + st.params.budget_rel)
                                           ? "PASS"
                                           : "FAIL")
              << "\n";
    return kExitPass;
}

int cmd_mintime(const Session& s, const std::string& history) {
    ProblemConfig cfg = s.load();
    OracleConfig oracle = make_oracle(cfg);
    const HistoryPath& x0 = cfg.history(history);
    auto r = min_time_value(x0, cfg.dynamics, cfg.target, oracle.search, oracle.policy);
    std::ostringstream csv;
    csv << "x0,value,method,mesh,nodes_explored\n";
    if (r) {
        csv << history << "," << fmt12(r->value) << "," << min_time_method_name(r->method)
            << "," << fmt12(r->mesh) << "," << r->nodes_explored << "\n";
        std::cout << "T_hat(" << history << ") = " << fmt12(r->value) << " ["
                  << min_time_method_name(r->method) << ", nodes " << r->nodes_explored
                  << "]\n";
    } else {
        csv << history << ",none,search," << fmt12(cfg.grids.switch_mesh) << ",0\n";
        std::cout << "T_hat(" << history << ") = none (no hit within horizon)\n";
    }
    write_text_file(s.out("mintime_" + history + ".csv"), csv.str());
    return kExitPass;
}

int cmd_certify(const Session& s, const std::string& check) {
    ProblemConfig cfg = s.load();
    if (check == "dpp") return emit_report(s, run_certify_dpp(cfg), "certify_dpp");
    if (check == "distance-bound")
        return emit_report(s, run_certify_distance_bound(cfg), "certify_distance_bound");
    if (check == "lipschitz")
        return emit_report(s, run_certify_lipschitz(cfg), "certify_lipschitz");
    if (check == "semiconcavity")
        return emit_report(s, run_certify_semiconcavity(cfg).report, "certify_semiconcavity");
    if (check == "boundary-lemma")
        return emit_report(s, run_certify_boundary(cfg), "certify_boundary_lemma");
    throw ConfigError("unknown certification '" + check +
                      "' (expected dpp|distance-bound|lipschitz|semiconcavity|boundary-lemma)");
}

int cmd_report(const Session& s) {
    ProblemConfig cfg = s.load();
    int exit = kExitPass;
    std::ostringstream summary;
    summary << "benchmark " << cfg.name << "\n";

    ValidationBundle v = run_validate(cfg);
    std::cout << v.to_text();
    write_text_file(s.out("validate.txt"), v.to_text());
    write_text_file(s.out("validate.json"), v.to_json());
    summary << "  validate: " << (v.pass ? "PASS" : "FAIL") << "\n";
    if (!v.pass) exit = worst_exit(exit, kExitCertificationFailure);

    auto run_one = [&](const std::string& name, CertificationReport rep,
                       const std::string& stem) {
        int e = emit_report(s, rep, stem);
        summary << "  " << name << ": " << (e == kExitPass ? "PASS" : "FAIL") << "\n";
        exit = worst_exit(exit, e);
    };
    run_one("steering", run_steering_sweep(cfg), "steering_sweep");
    run_one("dpp", run_certify_dpp(cfg), "certify_dpp");
    run_one("distance-bound", run_certify_distance_bound(cfg), "certify_distance_bound");
    run_one("lipschitz", run_certify_lipschitz(cfg), "certify_lipschitz");
    run_one("semiconcavity", run_certify_semiconcavity(cfg).report, "certify_semiconcavity");
    run_one("boundary-lemma", run_certify_boundary(cfg), "certify_boundary_lemma");

    std::cout << summary.str();
    write_text_file(s.out("summary.txt"), summary.str());
    return exit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum-time toolkit for delayed control systems"};
    app.require_subcommand(1);

    Session session;
    app.add_option("--config", session.config_path, "problem config file (JSON)")
        ->required();
    app.add_option("--output-dir", session.output_dir, "artifact directory");
    auto* seed_opt = app.add_option("--seed", session.seed, "override the config seed");

    auto* validate = app.add_subcommand("validate", "check H1/H3/H4 and derive constants");
    auto* simulate = app.add_subcommand("simulate", "integrate one history and export CSV");
    std::string history, control = "const:0";
    double t_end = 0.0;
    simulate->add_option("--history", history, "named history from the config")->required();
    simulate->add_option("--control", control, "control spec: const:IDX or t0:i0,t1:i1,...");
    simulate->add_option("--t-end", t_end, "integration horizon (default: grids.horizon)");
    auto* steer_cmd = app.add_subcommand("steer", "run the Petrov steering construction");
    steer_cmd->add_option("--history", history, "named history from the config")->required();
    auto* mintime_cmd = app.add_subcommand("mintime", "evaluate the minimum-time oracle");
    mintime_cmd->add_option("--history", history, "named history from the config")->required();
    auto* certify = app.add_subcommand("certify", "run one certification");
    std::string check;
    certify
        ->add_option("check", check,
                     "dpp|distance-bound|lipschitz|semiconcavity|boundary-lemma")
        ->required();
    auto* report = app.add_subcommand("report", "run everything and summarize");

    try {
        app.parse(argc, argv);
        session.seed_set = seed_opt->count() > 0;
        if (validate->parsed()) return cmd_validate(session);
        if (simulate->parsed()) return cmd_simulate(session, history, control, t_end);
        if (steer_cmd->parsed()) return cmd_steer(session, history);
        if (mintime_cmd->parsed()) return cmd_mintime(session, history);
        if (certify->parsed()) return cmd_certify(session, check);
        if (report->parsed()) return cmd_report(session);
        return kExitConfigError;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
