#include "qblfq/runconfig.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qblfq {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

std::vector<std::string> split_csv(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    cfg.raw_text = text;
    cfg.optimizer.kind = OptimizerKind::GRAD;

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    bool saw_weights = false, saw_refs = false;
    std::vector<std::uint64_t> refs;
    std::vector<double> weights;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto bad_value = [&](const char* what) {
            return std::invalid_argument("config line " + std::to_string(lineno) + ": bad " +
                                         std::string(what) + " '" + value + "' for " + key);
        };

        try {
            if (key == "hamiltonian.source") {
                cfg.source = value;
            } else if (key == "hamiltonian.matrix_file") {
                cfg.matrix_file = value;
            } else if (key == "hamiltonian.catalog_file") {
                cfg.catalog_file = value;
            } else if (key == "hamiltonian.kappa") {
                cfg.kappa = std::stod(value);
            } else if (key == "hamiltonian.mq") {
                cfg.mq = std::stod(value);
            } else if (key == "hamiltonian.encoding") {
                if (value == "direct") cfg.encoding = Encoding::direct;
                else if (value == "compact") cfg.encoding = Encoding::compact;
                else throw bad_value("encoding");
            } else if (key == "ansatz.kind") {
                if (value == "hea") cfg.ansatz.kind = AnsatzKind::HEA;
                else if (value == "ucc") cfg.ansatz.kind = AnsatzKind::UCC_single;
                else throw bad_value("ansatz kind");
            } else if (key == "ansatz.reps") {
                cfg.ansatz.reps = std::stoi(value);
            } else if (key == "ansatz.occupied_mode") {
                cfg.ansatz.occupied_mode = std::stoi(value);
            } else if (key == "ansatz.trotter_rho") {
                cfg.ansatz.trotter_rho = std::stoi(value);
            } else if (key == "method.kind") {
                if (value == "vqe") cfg.method = Method::vqe;
                else if (value == "ssvqe") cfg.method = Method::ssvqe;
                else throw bad_value("method");
            } else if (key == "method.initial") {
                cfg.initial = std::stoull(value);
            } else if (key == "ssvqe.references") {
                for (const auto& tok : split_csv(value)) refs.push_back(std::stoull(tok));
                saw_refs = true;
            } else if (key == "ssvqe.weights") {
                for (const auto& tok : split_csv(value)) weights.push_back(std::stod(tok));
                saw_weights = true;
            } else if (key == "ssvqe.kth_state_mode") {
                cfg.ssvqe.kth_state_mode = parse_bool(value, key);
            } else if (key == "ssvqe.kth_weight") {
                cfg.ssvqe.kth_weight = std::stod(value);
            } else if (key == "run.tier") {
                if (value == "sv") cfg.tier = Tier::SV;
                else if (value == "shots") cfg.tier = Tier::SHOTS;
                else if (value == "noisy") cfg.tier = Tier::NOISY;
                else throw bad_value("tier");
            } else if (key == "run.shots") {
                cfg.shots = std::stoull(value);
            } else if (key == "run.seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "run.output") {
                cfg.output_dir = value;
            } else if (key == "noise.readout_p01") {
                cfg.noise.readout_p01 = std::stod(value);
            } else if (key == "noise.readout_p10") {
                cfg.noise.readout_p10 = std::stod(value);
            } else if (key == "noise.depol_1q") {
                cfg.noise.depol_1q = std::stod(value);
            } else if (key == "noise.depol_2q") {
                cfg.noise.depol_2q = std::stod(value);
            } else if (key == "noise.mitigation") {
                cfg.mitigation = parse_bool(value, key);
            } else if (key == "noise.calibration_shots") {
                cfg.calibration_shots = std::stoull(value);
            } else if (key == "optimizer.kind") {
                if (value == "spsa") cfg.optimizer.kind = OptimizerKind::SPSA;
                else if (value == "simplex") cfg.optimizer.kind = OptimizerKind::SIMPLEX;
                else if (value == "grad") cfg.optimizer.kind = OptimizerKind::GRAD;
                else throw bad_value("optimizer kind");
            } else if (key == "optimizer.max_iterations") {
                cfg.optimizer.max_iterations = std::stoi(value);
            } else if (key == "optimizer.tolerance") {
                cfg.optimizer.tolerance = std::stod(value);
            } else if (key == "optimizer.restarts") {
                cfg.optimizer.restarts = std::stoi(value);
            } else if (key == "optimizer.spsa_a") {
                cfg.optimizer.spsa.a = std::stod(value);
            } else if (key == "optimizer.spsa_c") {
                cfg.optimizer.spsa.c = std::stod(value);
            } else if (key == "optimizer.spsa_A") {
                cfg.optimizer.spsa.big_a = std::stod(value);
            } else if (key == "optimizer.spsa_alpha") {
                cfg.optimizer.spsa.alpha = std::stod(value);
            } else if (key == "optimizer.spsa_gamma") {
                cfg.optimizer.spsa.gamma = std::stod(value);
            } else if (key == "observables.decay") {
                cfg.decay = parse_bool(value, key);
            } else if (key == "observables.pdf") {
                cfg.pdf = parse_bool(value, key);
            } else if (key == "observables.pdf_grid") {
                cfg.pdf_grid = std::stoi(value);
            } else if (key == "observables.pdf_states") {
                cfg.pdf_states.clear();
                for (const auto& tok : split_csv(value)) cfg.pdf_states.push_back(std::stoi(tok));
            } else if (key == "observables.density") {
                cfg.density = parse_bool(value, key);
            } else {
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    if (saw_refs || saw_weights) {
        if (saw_refs) cfg.ssvqe.references = refs;
        if (saw_weights)
            cfg.ssvqe.weights = weights;
        else if (saw_refs) {
            cfg.ssvqe.weights.clear();
            double w = 1.0;
            for (std::size_t i = 0; i < refs.size(); ++i, w *= 0.5) cfg.ssvqe.weights.push_back(w);
        }
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

HamiltonianSource RunConfig::hamiltonian() const {
    if (source == "external") {
        if (matrix_file.empty() || catalog_file.empty())
            throw std::invalid_argument("external Hamiltonian requires matrix_file and catalog_file");
        ModelParams p;
        p.kappa_mev = kappa;
        p.mq_mev = mq;
        return load_external_hamiltonian(matrix_file, catalog_file, p);
    }
    return builtin_hamiltonian(source);
}

PauliOperator RunConfig::encode_operator(const HamiltonianSource& src) const {
    if (encoding == Encoding::direct) return jw_encode_one_body(src.matrix);
    return compact_encode(pad_to_power_of_two(src.matrix));
}

void RunConfig::validate(const HamiltonianSource& src) const {
    if (encoding == Encoding::direct) {
        if (ansatz.kind != AnsatzKind::UCC_single)
            throw std::invalid_argument("direct encoding requires the UCC ansatz");
        if (src.label != HamiltonianLabel::builtin_1_1)
            throw std::invalid_argument("direct encoding is supported for builtin_1_1 only");
    }
}

}  // namespace qblfq
