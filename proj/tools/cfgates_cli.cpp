// Command-line front end: exact gate runs, parameter sweeps, noise curves,
// entanglement pipelines, counterfactuality audits and .cfg program
// execution. Results go to stdout or --out (JSON or CSV); diagnostics to
// stderr.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfgates/dsl.hpp"
#include "cfgates/entangle.hpp"
#include "cfgates/gates.hpp"
#include "cfgates/noise.hpp"

using json = nlohmann::ordered_json;
using namespace cfgates;

namespace {

constexpr const char* schema_run = "cfgates/run/v1";
constexpr const char* schema_entangle = "cfgates/entangle/v1";
constexpr const char* schema_audit = "cfgates/audit/v1";
constexpr const char* schema_exec = "cfgates/exec/v1";

// Probabilities are reported with six decimal digits.
double round6(double x) { return std::round(x * 1e6) / 1e6; }

GateKind parse_gate(const std::string& name) {
    if (name == "nand") return GateKind::nand2;
    if (name == "nand3") return GateKind::nand_multi;
    if (name == "nor") return GateKind::nor;
    if (name == "xor") return GateKind::xor_;
    throw CLI::ValidationError("--gate", "unknown gate '" + name + "' (nand|nand3|nor|xor)");
}

// Grid syntax: comma list ("1,2,3") and/or ranges ("10:30:5").
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const auto c1 = part.find(':');
        if (c1 == std::string::npos) {
            grid.push_back(std::stod(part));
            continue;
        }
        const auto c2 = part.find(':', c1 + 1);
        const double start = std::stod(part.substr(0, c1));
        const double stop = std::stod(part.substr(c1 + 1, c2 - c1 - 1));
        const double step = c2 == std::string::npos ? 1.0 : std::stod(part.substr(c2 + 1));
        if (step <= 0.0) throw CLI::ValidationError("grid", "step must be positive");
        for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    }
    if (grid.empty()) throw CLI::ValidationError("grid", "empty grid");
    return grid;
}

std::vector<int> parse_int_grid(const std::string& text) {
    std::vector<int> grid;
    for (double v : parse_grid(text)) grid.push_back(static_cast<int>(std::lround(v)));
    return grid;
}

std::vector<PartyInputs> parse_input_pairs(const std::string& text, int arity) {
    std::vector<PartyInputs> out;
    if (text == "all") {
        for (int code = 0; code < (1 << arity); ++code) {
            PartyInputs in(static_cast<std::size_t>(arity));
            // "01" means bob=0, charlie=1.
            for (int i = 0; i < arity; ++i) in[static_cast<std::size_t>(i)] = (code >> (arity - 1 - i)) & 1;
            out.push_back(in);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (static_cast<int>(part.size()) != arity)
            throw CLI::ValidationError("--inputs", "input pattern '" + part + "' must have " +
                                                       std::to_string(arity) + " bits");
        PartyInputs in;
        for (char c : part) {
            if (c != '0' && c != '1')
                throw CLI::ValidationError("--inputs", "input bits must be 0 or 1");
            in.push_back(c - '0');
        }
        out.push_back(in);
    }
    if (out.empty()) throw CLI::ValidationError("--inputs", "no input patterns");
    return out;
}

std::string input_code(const PartyInputs& inputs) {
    std::string s;
    for (int b : inputs) s += static_cast<char>('0' + b);
    return s;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CFGATES_SEED")) return std::strtoull(env, nullptr, 10);
    return 20240915ULL;
}

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << payload;
}

json distribution_json(const OutcomeDistribution& dist) {
    json sinks = json::object();
    for (const auto& [label, p] : dist.probabilities) sinks[label] = round6(p);
    return sinks;
}

json pipeline_json(const PipelineResult& r, const char* state) {
    json doc;
    doc["schema"] = schema_entangle;
    if (state) doc["state"] = state;
    doc["success_probability"] = round6(r.success_probability);
    doc["fidelity"] = round6(r.fidelity);
    doc["designated_port"] = r.designated_port == StagePort::output0 ? "output0" : "output1";
    json amps = json::object();
    for (const auto& [name, a] : r.postselected_amplitudes)
        amps[name] = json::array({round6(a.real()), round6(a.imag())});
    doc["postselected_amplitudes"] = amps;
    json failures = json::object();
    for (const auto& [name, p] : r.failure_breakdown) failures[name] = round6(p);
    doc["failure_breakdown"] = failures;
    return doc;
}

int cmd_run(const std::string& gate_name, int m, int n, int bob, int charlie, int david,
            bool have_david, const std::string& format, const std::string& out_path) {
    const GateKind kind = parse_gate(gate_name);
    GateConfig cfg{kind, m, n, kind == GateKind::nand_multi ? 3 : 2};
    PartyInputs inputs{bob, charlie};
    if (kind == GateKind::nand_multi) {
        if (!have_david) throw CLI::ValidationError("--david", "nand3 needs --david");
        inputs.push_back(david);
    } else if (have_david) {
        throw CLI::ValidationError("--david", "only nand3 takes a third party");
    }

    if (n < 4 * m)
        std::cerr << "note: N is small compared to M; blocked-channel fidelity will be poor\n";

    GateResult result = simulate_gate(cfg, inputs);
    TheoryPrediction theory = theory_prediction(cfg, inputs);

    if (format == "csv") {
        std::ostringstream csv;
        csv << "M,N,input_bob,input_charlie";
        if (inputs.size() == 3) csv << ",input_david";
        csv << ",P_D0,P_D1,theory_D0,theory_D1\n" << m << "," << n;
        for (int b : inputs) csv << "," << b;
        char buf[64];
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f\n", result.distribution.p_d0(),
                      result.distribution.p_d1(), theory.p_d0, theory.p_d1);
        csv << buf;
        write_output(out_path, csv.str());
        return 0;
    }
    if (format != "json") throw CLI::ValidationError("--format", "expected json or csv");

    json doc;
    doc["schema"] = schema_run;
    doc["gate"] = gate_name;
    doc["M"] = m;
    doc["N"] = n;
    doc["inputs"] = input_code(inputs);
    doc["P_D0"] = round6(result.distribution.p_d0());
    doc["P_D1"] = round6(result.distribution.p_d1());
    doc["theory_D0"] = round6(theory.p_d0);
    doc["theory_D1"] = round6(theory.p_d1);
    doc["gap_D0"] = round6(result.distribution.p_d0() - theory.p_d0);
    doc["gap_D1"] = round6(result.distribution.p_d1() - theory.p_d1);
    doc["output"] = result.distribution.p_d0() >= result.distribution.p_d1() ? 0 : 1;
    doc["sinks"] = distribution_json(result.distribution);
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& gate_name, const std::string& m_grid, const std::string& n_grid,
              const std::string& inputs_text, const std::string& out_path) {
    const GateKind kind = parse_gate(gate_name);
    const int arity = kind == GateKind::nand_multi ? 3 : 2;
    const auto ms = parse_int_grid(m_grid);
    const auto ns = parse_int_grid(n_grid);
    const auto input_list = parse_input_pairs(inputs_text, arity);

    std::ostringstream csv;
    csv << "M,N,input_bob,input_charlie";
    if (arity == 3) csv << ",input_david";
    csv << ",P_D0,P_D1,theory_D0,theory_D1\n";
    char buf[64];
    for (int m : ms) {
        for (int n : ns) {
            GateConfig cfg{kind, m, n, arity};
            GateNetwork network = build_gate_network(cfg);
            for (const PartyInputs& inputs : input_list) {
                GateResult r = simulate_gate(network, inputs);
                TheoryPrediction t = theory_prediction(cfg, inputs);
                csv << m << "," << n;
                for (int b : inputs) csv << "," << b;
                std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f\n",
                              r.distribution.p_d0(), r.distribution.p_d1(), t.p_d0, t.p_d1);
                csv << buf;
            }
        }
    }
    write_output(out_path, csv.str());
    return 0;
}

int cmd_noise(const std::string& gate_name, int m, int n, const std::string& gamma_grid,
              int samples, std::uint64_t seed, const std::string& policy,
              const std::string& out_path) {
    const GateKind kind = parse_gate(gate_name);
    GateConfig cfg{kind, m, n, kind == GateKind::nand_multi ? 3 : 2};
    const int arity = gate_arity(kind, cfg.parties);
    const auto gammas = parse_grid(gamma_grid);
    const auto input_list = parse_input_pairs("all", arity);

    NoiseModel model;
    model.samples = samples;
    model.seed = seed;
    model.policy = policy == "per-run" ? NoiseModel::Policy::per_run
                                       : NoiseModel::Policy::per_segment;

    // One sweep per input pattern, merged into one table row per gamma.
    std::vector<std::vector<NoiseSweepRow>> sweeps;
    for (const PartyInputs& inputs : input_list)
        sweeps.push_back(noise_sweep(cfg, inputs, gammas, model));

    std::ostringstream csv;
    csv << "gamma";
    for (const PartyInputs& inputs : input_list) {
        const std::string code = input_code(inputs);
        csv << ",E_" << code << "D0,se_" << code << "D0,E_" << code << "D1,se_" << code << "D1";
    }
    csv << "\n";
    char buf[64];
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        std::snprintf(buf, sizeof buf, "%.6f", gammas[g]);
        csv << buf;
        for (std::size_t i = 0; i < input_list.size(); ++i) {
            const EffectiveProbabilities& e = sweeps[i][g].values;
            std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f", e.e_d0, e.stderr_e_d0, e.e_d1,
                          e.stderr_e_d1);
            csv << buf;
        }
        csv << "\n";
    }
    write_output(out_path, csv.str());
    return 0;
}

int cmd_entangle(const std::string& state, int m, int n, bool ideal, const std::string& out_path) {
    PipelineResult result;
    if (state == "ghz") {
        result = ideal ? ideal_oracle(PipelineKind::ghz) : ghz_pipeline(m, n);
    } else if (state == "w") {
        result = ideal ? ideal_oracle(PipelineKind::w) : w_pipeline(m, n);
    } else {
        throw CLI::ValidationError("--state", "unknown state '" + state + "' (ghz|w)");
    }
    json doc = pipeline_json(result, state.c_str());
    if (!ideal) {
        doc["M"] = m;
        doc["N"] = n;
    }
    doc["ideal"] = ideal;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_audit(const std::string& gate_name, int m, int n, const std::string& out_path) {
    const GateKind kind = parse_gate(gate_name);
    GateConfig cfg{kind, m, n, kind == GateKind::nand_multi ? 3 : 2};
    const int arity = gate_arity(kind, cfg.parties);

    json doc;
    doc["schema"] = schema_audit;
    doc["gate"] = gate_name;
    doc["M"] = m;
    doc["N"] = n;
    json per_input = json::object();
    for (const PartyInputs& inputs : parse_input_pairs("all", arity)) {
        AuditReport report = counterfactual_audit(cfg, inputs);
        json entry;
        entry["max_deviation"] = report.max_deviation;
        entry["balanced_arm_residual"] = report.max_recombination_residual;
        per_input[input_code(inputs)] = entry;
    }
    doc["per_input"] = per_input;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_exec(const std::string& path, bool ideal, const std::string& out_path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open program: " << path << "\n";
        return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    CircuitProgram program = parse_program(buffer.str());
    PipelineResult result = execute_program(program, ideal);
    json doc = pipeline_json(result, nullptr);
    doc["schema"] = schema_exec;
    doc["program"] = path;
    doc["ideal"] = ideal;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual logic gate simulator"};
    app.require_subcommand(1);

    std::string gate = "nand", out_path, format = "json";
    int m = 8, n = 64;
    int bob = 1, charlie = 1, david = 1;

    auto* run = app.add_subcommand("run", "exact gate run with theory side-by-side");
    run->add_option("--gate", gate, "nand|nand3|nor|xor")->required();
    run->add_option("--m", m, "outer chain order M")->required();
    run->add_option("--n", n, "inner chain order N")->required();
    auto* bob_opt = run->add_option("--bob", bob, "Bob's input (0|1)")->required();
    run->add_option("--charlie", charlie, "Charlie's input (0|1)")->required();
    auto* david_opt = run->add_option("--david", david, "David's input (nand3 only)");
    run->add_option("--format", format, "json|csv");
    run->add_option("--out", out_path, "output file (default stdout)");
    (void)bob_opt;

    std::string m_grid = "8", n_grid = "64", inputs_text = "all";
    auto* sweep = app.add_subcommand("sweep", "M/N grid sweep as CSV");
    sweep->add_option("--gate", gate)->required();
    sweep->add_option("--m-grid", m_grid, "e.g. 10:30:5 or 8,16,30")->required();
    sweep->add_option("--n-grid", n_grid)->required();
    sweep->add_option("--inputs", inputs_text, "comma list of bit patterns, or 'all'");
    sweep->add_option("--out", out_path);

    std::string gamma_grid = "0:0.03:0.005", policy = "per-segment";
    int samples = 2000;
    std::uint64_t seed = default_seed();
    auto* noise = app.add_subcommand("noise", "Monte Carlo channel-noise curves as CSV");
    noise->add_option("--gate", gate)->required();
    noise->add_option("--m", m)->required();
    noise->add_option("--n", n)->required();
    noise->add_option("--gamma-grid", gamma_grid);
    noise->add_option("--samples", samples);
    noise->add_option("--seed", seed, "RNG seed (default from CFGATES_SEED)");
    noise->add_option("--policy", policy, "per-segment|per-run noise granularity");
    noise->add_option("--out", out_path);

    std::string state = "ghz";
    bool ideal = false;
    auto* entangle = app.add_subcommand("entangle", "GHZ/W pipeline as JSON");
    entangle->add_option("--state", state, "ghz|w")->required();
    entangle->add_option("--m", m);
    entangle->add_option("--n", n);
    entangle->add_flag("--ideal", ideal, "use the ideal-limit gate maps");
    entangle->add_option("--out", out_path);

    auto* audit = app.add_subcommand("audit", "counterfactuality audit as JSON");
    audit->add_option("--gate", gate)->required();
    audit->add_option("--m", m)->required();
    audit->add_option("--n", n)->required();
    audit->add_option("--out", out_path);

    std::string program_path;
    auto* exec = app.add_subcommand("exec", "run a .cfg circuit program");
    exec->add_option("program", program_path, "path to the .cfg file")->required();
    exec->add_flag("--ideal", ideal);
    exec->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(gate, m, n, bob, charlie, david, david_opt->count() > 0, format,
                           out_path);
        if (sweep->parsed()) return cmd_sweep(gate, m_grid, n_grid, inputs_text, out_path);
        if (noise->parsed()) return cmd_noise(gate, m, n, gamma_grid, samples, seed, policy, out_path);
        if (entangle->parsed()) return cmd_entangle(state, m, n, ideal, out_path);
        if (audit->parsed()) return cmd_audit(gate, m, n, out_path);
        if (exec->parsed()) return cmd_exec(program_path, ideal, out_path);
    } catch (const DslError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
