#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "qblfq/observables.hpp"
#include "qblfq/rng.hpp"
#include "qblfq/runconfig.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qblfq;

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> output_override;
};

RunConfig load_config(const CliOptions& opt) {
    RunConfig cfg = RunConfig::load(opt.config_path);
    if (opt.seed_override) cfg.seed = *opt.seed_override;
    if (opt.output_override) cfg.output_dir = *opt.output_override;
    fs::create_directories(cfg.output_dir);
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int max_threads() {
    // Evaluations are sequential by design (deterministic seeding); the cap
    // is parsed so configs stay portable to parallel builds.
    const char* env = std::getenv("QBLFQ_MAX_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

json state_json(const StateResult& s) {
    return json{{"reference_bitstring", s.reference_bitstring},
                {"energy_MeV2", s.energy_mev2},
                {"mass_MeV", s.mass_mev},
                {"std_error", s.std_error}};
}

const char* tier_name(Tier t) {
    return t == Tier::SV ? "sv" : (t == Tier::SHOTS ? "shots" : "noisy");
}

json decay_json(const DecayResult& d) {
    json j{{"channel", d.channel == DecayChannel::pseudoscalar ? "pseudoscalar" : "vector"},
           {"f_MeV", d.f_mev},
           {"std_error", d.std_error},
           {"K_MeV", d.k_mev},
           {"tier", tier_name(d.tier)}};
    if (d.clamped) j["clamped"] = true;
    return j;
}

std::vector<std::string> basis_labels(const BasisCatalog& catalog) {
    std::vector<std::string> labels;
    for (int i = 0; i < catalog.size(); ++i) labels.push_back(catalog.bitstring(i));
    return labels;
}

int cmd_encode(const CliOptions& opt) {
    const RunConfig cfg = load_config(opt);
    const auto src = cfg.hamiltonian();
    cfg.validate(src);
    const auto op = cfg.encode_operator(src);
    const std::string name =
        cfg.encoding == Encoding::direct ? "operator_direct.txt" : "operator_compact.txt";
    write_file(fs::path(cfg.output_dir) / name, op.to_text());

    json out{{"command", "encode"},
             {"operator_file", (fs::path(cfg.output_dir) / name).string()},
             {"n_qubits", op.n_qubits()},
             {"n_terms", op.n_terms()}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_exact(const CliOptions& opt) {
    const RunConfig cfg = load_config(opt);
    const auto src = cfg.hamiltonian();
    const auto eig = exact_eigensolve(src);

    json out{{"command", "exact"}, {"config", cfg.raw_text}};
    out["eigenvalues_MeV2"] = eig.values;
    std::vector<double> masses;
    for (double v : eig.values) masses.push_back(std::sqrt(std::max(0.0, v)));
    out["masses_MeV"] = masses;

    if (cfg.decay) {
        std::vector<cxd> v0(src.matrix.rows()), v1(src.matrix.rows());
        for (std::size_t i = 0; i < v0.size(); ++i) {
            v0[i] = eig.vectors(i, 0);
            v1[i] = eig.vectors(i, 1);
        }
        const auto fp = measure_decay_constant(v0, DecayChannel::pseudoscalar, src, Tier::SV, 0, 0);
        const auto fv = measure_decay_constant(v1, DecayChannel::vector, src, Tier::SV, 0, 0);
        out["decay"] = json::array({decay_json(fp), decay_json(fv)});
    }
    if (cfg.pdf) {
        const auto grid = default_pdf_grid(cfg.pdf_grid);
        json files = json::array();
        for (int k : cfg.pdf_states) {
            if (k < 0 || k >= static_cast<int>(eig.values.size())) continue;
            std::vector<cxd> v(src.matrix.rows());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = eig.vectors(i, static_cast<std::size_t>(k));
            const auto scan = pdf_scan(v, src.catalog, src.params, grid, Tier::SV, 0, 0);
            const auto path = fs::path(cfg.output_dir) / ("pdf_exact_state" + std::to_string(k) + ".csv");
            write_file(path, pdf_to_csv(scan));
            files.push_back(path.string());
        }
        out["pdf_files"] = files;
    }
    write_file(fs::path(cfg.output_dir) / "exact.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_solve(const CliOptions& opt) {
    const RunConfig cfg = load_config(opt);
    (void)max_threads();
    const auto src = cfg.hamiltonian();
    cfg.validate(src);
    const auto op = cfg.encode_operator(src);

    AnsatzSpec ansatz = cfg.ansatz;
    ansatz.n_qubits = op.n_qubits();

    RunSettings settings;
    settings.tier = cfg.tier;
    settings.shots = cfg.shots;
    settings.noise = cfg.noise;
    settings.mitigation = cfg.mitigation;
    settings.calibration_shots = cfg.calibration_shots;

    SpectrumResult result;
    if (cfg.method == Method::vqe) {
        std::uint64_t initial = cfg.initial;
        if (ansatz.kind == AnsatzKind::UCC_single)
            initial = 1ULL << ansatz.occupied_mode;  // one-hot reference occupation
        result = run_vqe(op, ansatz, initial, settings, cfg.optimizer, cfg.seed);
    } else {
        result = run_ssvqe(op, ansatz, cfg.ssvqe, settings, cfg.optimizer, cfg.seed);
    }

    const fs::path dir(cfg.output_dir);
    write_file(dir / "cost_trace.csv", result.optimizer_trace.to_csv());
    json out{{"command", "solve"},
             {"seed", cfg.seed},
             {"tier", tier_name(cfg.tier)},
             {"config", cfg.raw_text},
             {"termination", result.optimizer_trace.termination},
             {"trace_files", json::array({(dir / "cost_trace.csv").string()})}};
    out["states"] = json::array();
    for (std::size_t k = 0; k < result.states.size(); ++k) {
        const auto& s = result.states[k];
        out["states"].push_back(state_json(s));
        const auto path = dir / ("state" + std::to_string(k) + "_trace.csv");
        write_file(path, s.trace_csv());
        out["trace_files"].push_back(path.string());
    }

    std::optional<MitigationFilter> filter;
    const NoiseSpec* noise_ptr = cfg.tier == Tier::NOISY ? &cfg.noise : nullptr;
    if (cfg.tier == Tier::NOISY && cfg.mitigation)
        filter = build_calibration_filter(op.n_qubits(), cfg.noise, cfg.calibration_shots,
                                          derive_seed({cfg.seed, 0x6f62736dULL}));

    if (cfg.decay && cfg.encoding == Encoding::compact) {
        json decays = json::array();
        const DecayChannel channels[2] = {DecayChannel::pseudoscalar, DecayChannel::vector};
        for (std::size_t k = 0; k < result.states.size() && k < 2; ++k) {
            const auto d = measure_decay_constant(
                result.states[k].final_state, channels[k], src, cfg.tier, cfg.shots,
                derive_seed({cfg.seed, 0x646563ULL, k}), noise_ptr, filter ? &*filter : nullptr);
            decays.push_back(decay_json(d));
            write_file(dir / ("decay_state" + std::to_string(k) + ".json"),
                       decays.back().dump(2) + "\n");
        }
        out["decay"] = decays;
    }
    if (cfg.pdf && cfg.encoding == Encoding::compact) {
        const auto grid = default_pdf_grid(cfg.pdf_grid);
        json files = json::array();
        for (int k : cfg.pdf_states) {
            if (k < 0 || k >= static_cast<int>(result.states.size())) continue;
            const auto scan = pdf_scan(result.states[static_cast<std::size_t>(k)].final_state,
                                       src.catalog, src.params, grid, cfg.tier, cfg.shots,
                                       derive_seed({cfg.seed, 0x736366ULL, static_cast<std::uint64_t>(k)}),
                                       noise_ptr, filter ? &*filter : nullptr);
            const auto path = dir / ("pdf_state" + std::to_string(k) + ".csv");
            write_file(path, pdf_to_csv(scan));
            files.push_back(path.string());
        }
        out["pdf_files"] = files;
    }
    if (cfg.density) {
        for (std::size_t k = 0; k < result.states.size(); ++k) {
            const auto rho = density_matrix(result.states[k].final_state);
            write_file(dir / ("density_state" + std::to_string(k) + ".json"),
                       density_matrix_to_json(rho, basis_labels(src.catalog)));
        }
    }

    write_file(dir / "result.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_pdf_scan(const CliOptions& opt) {
    const RunConfig cfg = load_config(opt);
    const auto src = cfg.hamiltonian();
    const auto eig = exact_eigensolve(src);
    const auto grid = default_pdf_grid(cfg.pdf_grid);

    json out{{"command", "pdf-scan"}, {"tier", tier_name(cfg.tier)}, {"config", cfg.raw_text}};
    json files = json::array();
    for (int k : cfg.pdf_states) {
        if (k < 0 || k >= static_cast<int>(eig.values.size())) continue;
        std::vector<cxd> v(src.matrix.rows());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = eig.vectors(i, static_cast<std::size_t>(k));
        const auto scan =
            pdf_scan(v, src.catalog, src.params, grid, cfg.tier, cfg.shots,
                     derive_seed({cfg.seed, 0x7363616eULL, static_cast<std::uint64_t>(k)}),
                     cfg.tier == Tier::NOISY ? &cfg.noise : nullptr, nullptr);
        const auto path = fs::path(cfg.output_dir) / ("pdf_state" + std::to_string(k) + ".csv");
        write_file(path, pdf_to_csv(scan));
        files.push_back(path.string());
    }
    out["pdf_files"] = files;
    write_file(fs::path(cfg.output_dir) / "pdf_scan.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_calibrate(const CliOptions& opt) {
    const RunConfig cfg = load_config(opt);
    const auto src = cfg.hamiltonian();
    const auto cal = calibrate_decay_prefactor(src);
    json out{{"command", "calibrate"},
             {"K_MeV", cal.k_mev},
             {"kappa_MeV", src.params.kappa_mev},
             {"mq_MeV", src.params.mq_mev}};
    write_file(fs::path(cfg.output_dir) / "calibration.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Light-front hadron spectroscopy and observables on simulated quantum devices"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "run configuration file")->required();
        sub->add_option("--seed", opt.seed_override, "override the config seed");
        sub->add_option("--output", opt.output_override, "override the output directory");
    };

    auto* encode = app.add_subcommand("encode", "emit the qubitized Hamiltonian operator");
    auto* exact = app.add_subcommand("exact", "classical diagonalization reference pipeline");
    auto* solve = app.add_subcommand("solve", "run VQE/SSVQE and measure observables");
    auto* pdfscan = app.add_subcommand("pdf-scan", "PDF scan on exact eigenstates");
    auto* calibrate = app.add_subcommand("calibrate", "decay-constant prefactor calibration");
    for (auto* sub : {encode, exact, solve, pdfscan, calibrate}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed()) return cmd_encode(opt);
        if (exact->parsed()) return cmd_exact(opt);
        if (solve->parsed()) return cmd_solve(opt);
        if (pdfscan->parsed()) return cmd_pdf_scan(opt);
        if (calibrate->parsed()) return cmd_calibrate(opt);
    } catch (const std::exception& e) {
        json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
