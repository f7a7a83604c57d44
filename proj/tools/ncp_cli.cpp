#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ncp/discord.hpp"
#include "ncp/io.hpp"
#include "ncp/noise.hpp"
#include "ncp/optics.hpp"
#include "ncp/preparation.hpp"

namespace {

using ncp::json;

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    long long seed = -1;  // negative means: use the config's seed
};

json load_config(const Common& c) {
    json j = json::parse(ncp::read_file(c.config_path));
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return j;
}

std::string out_path(const Common& c, const std::string& name) {
    std::filesystem::create_directories(c.out_dir);
    return (std::filesystem::path(c.out_dir) / name).string();
}

json discord_result_json(const ncp::DiscordResult& r) {
    return json{{"value", r.value}, {"theta", r.theta}, {"phi", r.phi}};
}

void write_landscape(const std::string& path, const ncp::DensityMatrix& rho, ncp::Side side) {
    std::ofstream f(path);
    f << "theta,phi,value\n";
    for (const auto& [t, p, v] : ncp::discord_landscape(rho, side))
        f << t << ',' << p << ',' << v << '\n';
}

int cmd_discord(const Common& c) {
    json cfg = load_config(c);
    ncp::DensityMatrix rho = ncp::state_from_json(cfg.at("state"));
    if (rho.d != 4) throw std::invalid_argument("discord needs a two-qubit state");
    ncp::DiscordResult ab = ncp::discord(rho, ncp::Side::second);
    ncp::DiscordResult ba = ncp::discord(rho, ncp::Side::first);
    json report{{"A:B", discord_result_json(ab)}, {"B:A", discord_result_json(ba)}};
    ncp::write_file(out_path(c, "discord.json"), report.dump(2) + "\n");
    write_landscape(out_path(c, "landscape_ab.csv"), rho, ncp::Side::second);
    write_landscape(out_path(c, "landscape_ba.csv"), rho, ncp::Side::first);
    return 0;
}

void write_eigenvalue_csv(const std::string& path, const std::vector<double>& eigs) {
    std::ofstream f(path);
    f << "index,eigenvalue\n";
    for (std::size_t i = 0; i < eigs.size(); ++i) f << i << ',' << eigs[i] << '\n';
}

int cmd_sqpt(const Common& c) {
    json cfg = load_config(c);
    ncp::DensityMatrix gamma = ncp::state_from_json(cfg.at("initial_state"));
    ncp::CMatrix u = ncp::unitary_from_json(cfg.at("unitary"));
    const std::string prep = cfg.at("preparation").get<std::string>();
    ncp::PrepKind kind;
    if (prep == "measure_rotate")
        kind = ncp::PrepKind::measure_rotate;
    else if (prep == "measure_only")
        kind = ncp::PrepKind::measure_only;
    else
        throw std::invalid_argument("unknown preparation kind: " + prep);

    ncp::SqptExperiment ex = ncp::run_sqpt_experiment(gamma, u, kind);
    json envs = json::array();
    for (const ncp::DensityMatrix& t : ex.env_states) envs.push_back(ncp::matrix_to_json(t.mat));
    json report{{"procedure", prep},
                {"probs", ex.probs},
                {"env_states", envs},
                {"choi", ncp::matrix_to_json(ex.L.mat)},
                {"eigenvalues", ex.eigenvalues},
                {"cp", ex.cp},
                {"tp_defect", ncp::is_tp(ex.L).defect}};
    ncp::write_file(out_path(c, "sqpt_report.json"), report.dump(2) + "\n");
    write_eigenvalue_csv(out_path(c, "eigenvalues.csv"), ex.eigenvalues);
    return 0;
}

int cmd_aapt(const Common& c) {
    json cfg = load_config(c);
    ncp::DensityMatrix probe = ncp::state_from_json(cfg.at("probe"));
    ncp::ProcessMatrix ch = ncp::channel_from_json(cfg.at("channel"));
    ncp::KrausSet k = ncp::process_to_kraus(ch);
    ncp::KrausSet lifted;
    for (const ncp::CMatrix& op : k.ops)
        lifted.ops.push_back(ncp::tensor(ncp::CMatrix::identity(2), op));
    ncp::DensityMatrix out = ncp::apply_kraus(lifted, probe);
    ncp::ProcessMatrix L = ncp::aapt(out, probe);
    ncp::CpReport cp = ncp::is_cp(L);
    json report{{"choi", ncp::matrix_to_json(L.mat)},
                {"eigenvalues", cp.eigenvalues},
                {"cp", cp.cp},
                {"tp_defect", ncp::is_tp(L).defect},
                {"probe_faithfulness", ncp::faithfulness(probe)}};
    ncp::write_file(out_path(c, "aapt_report.json"), report.dump(2) + "\n");
    write_eigenvalue_csv(out_path(c, "eigenvalues.csv"), cp.eigenvalues);
    return 0;
}

json mc_report_json(const ncp::MCReport& r) {
    return json{{"samples", r.samples},
                {"seed", r.seed},
                {"cp_fraction", r.cp_fraction},
                {"mean", r.mean},
                {"variance", r.variance},
                {"predicted_variance", r.predicted_variance}};
}

void write_trial_eigs(const std::string& path, const ncp::MCReport& r) {
    std::ofstream f(path);
    if (r.trial_eigenvalues.empty()) return;
    f << "trial";
    for (std::size_t i = 0; i < r.trial_eigenvalues.front().size(); ++i) f << ",eig" << i + 1;
    f << '\n';
    for (std::size_t t = 0; t < r.trial_eigenvalues.size(); ++t) {
        f << t;
        for (double e : r.trial_eigenvalues[t]) f << ',' << e;
        f << '\n';
    }
}

int cmd_noise_mc(const Common& c) {
    json cfg = load_config(c);
    ncp::NoiseModel model;
    model.shots = cfg.at("shots").get<std::uint64_t>();
    if (cfg.contains("noise")) {
        const std::string kind = cfg.at("noise").at("kind").get<std::string>();
        if (kind == "poisson")
            model.kind = ncp::NoiseKind::poisson;
        else if (kind == "gaussian_approx")
            model.kind = ncp::NoiseKind::gaussian_approx;
        else
            throw std::invalid_argument("unknown noise kind: " + kind);
    }
    const std::size_t trials = cfg.at("trials").get<std::size_t>();
    std::uint64_t seed = cfg.value("seed", 0ull);
    if (c.seed >= 0) seed = std::uint64_t(c.seed);
    ncp::TomographicBasis basis = ncp::TomographicBasis::standard_qubit();

    const std::string mode = cfg.at("mode").get<std::string>();
    ncp::MCReport rep;
    json report;
    if (mode == "state") {
        ncp::DensityMatrix rho = ncp::state_from_json(cfg.at("state"));
        rep = ncp::mc_state_reconstruction(rho, basis, model, trials, seed);
        report = mc_report_json(rep);
    } else if (mode == "process") {
        ncp::ProcessMatrix L = ncp::channel_from_json(cfg.at("channel"));
        rep = ncp::mc_process_reconstruction(L, basis, basis, model, trials, seed);
        report = mc_report_json(rep);
        if (cfg.value("ml", false)) {
            std::vector<ncp::CountRecord> counts = ncp::sample_counts(
                ncp::expected_counts(L, basis, basis, model.shots), model, seed);
            ncp::ProcessMatrix init(ncp::CMatrix::identity(4) * ncp::cx(0.5), 2);
            ncp::MlResult ml = ncp::ml_estimate(counts, basis, basis, init);
            report["ml"] = json{{"objective", ml.objective},
                                {"iterations", ml.iterations},
                                {"choi", ncp::matrix_to_json(ml.L.mat)},
                                {"cp", ncp::is_cp(ml.L, 1e-8).cp},
                                {"tp_defect", ncp::is_tp(ml.L).defect}};
        }
    } else {
        throw std::invalid_argument("mode must be state or process");
    }
    ncp::write_file(out_path(c, "mc_report.json"), report.dump(2) + "\n");
    write_trial_eigs(out_path(c, "trial_eigenvalues.csv"), rep);
    return 0;
}

int cmd_optics(const Common& c) {
    json cfg = load_config(c);
    ncp::DensityMatrix gamma = ncp::state_from_json(cfg.at("initial_state"));
    const std::string method = cfg.at("method").get<std::string>();
    if (method != "I" && method != "II")
        throw std::invalid_argument("method must be \"I\" or \"II\"");
    ncp::OpticsExperiment ex = ncp::run_optics_experiment(
        gamma, method == "I" ? ncp::OpticsMethod::I : ncp::OpticsMethod::II);
    json settings = json::array();
    for (std::size_t i = 0; i < ex.settings.size(); ++i) {
        const ncp::PrepSetting& s = ex.settings[i];
        settings.push_back(json{{"target", s.target},
                                {"theta_p", s.theta_p},
                                {"theta_h", s.theta_h},
                                {"theta_q", s.theta_q},
                                {"z_shift", s.z_shift},
                                {"prob", ex.probs[i]},
                                {"env_state", ncp::matrix_to_json(ex.env_states[i].mat)}});
    }
    json report{{"method", method},
                {"settings", settings},
                {"choi", ncp::matrix_to_json(ex.L.mat)},
                {"eigenvalues", ex.eigenvalues},
                {"cp", ex.cp},
                {"tp_defect", ncp::is_tp(ex.L).defect}};
    ncp::write_file(out_path(c, "optics_report.json"), report.dump(2) + "\n");
    write_eigenvalue_csv(out_path(c, "eigenvalues.csv"), ex.eigenvalues);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open-system tomography toolkit"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file")->required();
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--seed", common.seed, "override the config seed");
    };
    CLI::App* discord = app.add_subcommand("discord", "discord values and landscape scans");
    CLI::App* sqpt = app.add_subcommand("sqpt", "correlated-input process tomography");
    CLI::App* aapt = app.add_subcommand("aapt", "ancilla-assisted process tomography");
    CLI::App* mc = app.add_subcommand("noise-mc", "counting-noise Monte Carlo");
    CLI::App* optics = app.add_subcommand("optics", "linear-optics experiment simulation");
    for (CLI::App* sub : {discord, sqpt, aapt, mc, optics}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (discord->parsed()) return cmd_discord(common);
        if (sqpt->parsed()) return cmd_sqpt(common);
        if (aapt->parsed()) return cmd_aapt(common);
        if (mc->parsed()) return cmd_noise_mc(common);
        if (optics->parsed()) return cmd_optics(common);
    } catch (const ncp::PreparationFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ncp::MlNonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
