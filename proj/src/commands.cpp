// Copyright 2026 The spinqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinqec/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "detail.hpp"
#include "json.hpp"
#include "spinqec/codeword.hpp"
#include "spinqec/error.hpp"
#include "spinqec/qec_sim.hpp"
#include "spinqec/spin_model.hpp"
#include "spinqec/tailor.hpp"

namespace spinqec {

namespace {

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    std::string s(v);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(out)) {
        throw PreconditionError("option " + std::string(key) + ": '" + s + "' is not a number");
    }
    return out;
}

long long to_int(std::string_view key, std::string_view v) {
    long long out = 0;
    std::string s(v);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw PreconditionError("option " + std::string(key) + ": '" + s + "' is not an integer");
    }
    return out;
}

SpinSystem system_of(const RunConfig& cfg) {
    SpinSystem sys = SpinSystem::resolve(cfg.system);
    if (cfg.hyperfine) sys.hyperfine = *cfg.hyperfine;
    return sys;
}

std::string describe(const RunConfig& cfg, const SpinSystem& sys) {
    std::string s = "system=" + sys.name + " A_MHz=" + detail::fmt(sys.hyperfine);
    return s + " grid=" + detail::fmt(cfg.grid.start) + ".." + detail::fmt(cfg.grid.stop) + "/" +
           std::to_string(cfg.grid.points);
}

CodeFamily default_family(const SpinSystem& sys) {
    return sys.nucleus == Spin{9} ? CodeFamily::Tailored92 : CodeFamily::Distorted72;
}

CodeFamily family_of(const RunConfig& cfg, const SpinSystem& sys) {
    return cfg.family.empty() ? default_family(sys) : parse_family(cfg.family);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

nlohmann::json cjson(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

std::vector<double> FieldGrid::values() const {
    if (points < 1) throw PreconditionError("field grid needs at least one point");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw PreconditionError("field grid bounds must be finite");
    if (points == 1) return {start};
    if (!(stop > start)) throw PreconditionError("field grid must be strictly increasing (bstop > bstart)");
    std::vector<double> v(points);
    for (int k = 0; k < points; ++k) v[k] = start + (stop - start) * k / (points - 1);
    return v;
}

void RunConfig::set(std::string_view key, std::string_view value) {
    if (key == "system") {
        system = value;
    } else if (key == "hyperfine") {
        hyperfine = to_double(key, value);
    } else if (key == "bstart") {
        grid.start = to_double(key, value);
    } else if (key == "bstop") {
        grid.stop = to_double(key, value);
    } else if (key == "bpoints") {
        grid.points = static_cast<int>(to_int(key, value));
    } else if (key == "field") {
        field = to_double(key, value);
    } else if (key == "family") {
        family = value;
    } else if (key == "freeze-at" || key == "freeze_at") {
        freeze_at = to_double(key, value);
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "trajectories") {
        trajectories = static_cast<int>(to_int(key, value));
        if (trajectories < 0) throw PreconditionError("trajectories must be nonnegative");
    } else if (key == "mode") {
        if (value != "full" && value != "z-biased" && value != "exact-branch") {
            throw PreconditionError("mode must be full, z-biased or exact-branch");
        }
        mode = value;
    } else if (key == "error") {
        error = value;
    } else if (key == "conditions") {
        conditions.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            conditions.emplace_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    } else if (key == "half-width" || key == "half_width") {
        half_width = to_double(key, value);
        if (!(half_width > 0.0)) throw PreconditionError("half-width must be positive");
    } else if (key == "cells") {
        cells = static_cast<int>(to_int(key, value));
        if (cells < 2) throw PreconditionError("cells must be at least 2");
    } else if (key == "error-probability" || key == "error_probability") {
        error_probability = to_double(key, value);
    } else if (key == "threads") {
        threads = static_cast<unsigned>(to_int(key, value));
    } else {
        throw PreconditionError("unknown option '" + std::string(key) + "'");
    }
}

std::string cmd_levels(const RunConfig& cfg) {
    const SpinSystem sys = system_of(cfg);
    const std::vector<double> fields = cfg.grid.values();
    const std::size_t dim = sys.dim();
    const std::size_t nf = sys.nucleus.dim() - 1;

    std::vector<double> reference;
    std::string reference_error;
    try {
        reference = nuclear_transition_frequencies(sys, 1.0, -0.5);
    } catch (const Error& e) {
        reference_error = e.what();
    }

    struct Row {
        std::vector<double> energies;
        std::vector<double> freqs;
        std::string error;
    };
    std::vector<Row> rows(fields.size());
    detail::parallel_for(fields.size(), cfg.threads, [&](std::size_t k) {
        Row& r = rows[k];
        try {
            const auto states = dressed_eigenstates(sys, Field::axial(fields[k]));
            for (const auto& s : states) r.energies.push_back(s.energy);
            for (std::size_t i = 0; i < nf; ++i) {
                const double lo = sys.nucleus.projection(i);
                r.freqs.push_back(find_state(states, {-0.5, lo + 1.0}).energy - find_state(states, {-0.5, lo}).energy);
            }
        } catch (const Error& e) {
            r.error = e.what();
        }
    });

    std::string out = "# energy levels and m_S=-1/2 nuclear transition frequencies (MHz) vs field; df = f(B) - f(1 T); " +
                      describe(cfg, sys) + "\n";
    out += "B_tesla";
    for (std::size_t i = 1; i <= dim; ++i) out += ",E_" + std::to_string(i);
    for (std::size_t i = 1; i <= nf; ++i) out += ",f_" + std::to_string(i);
    for (std::size_t i = 1; i <= nf; ++i) out += ",df_" + std::to_string(i);
    out += ",status\n";
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const Row& r = rows[k];
        out += detail::fmt(fields[k]);
        for (std::size_t i = 0; i < dim; ++i) out += "," + (r.error.empty() ? detail::fmt(r.energies[i]) : "nan");
        for (std::size_t i = 0; i < nf; ++i) out += "," + (r.error.empty() ? detail::fmt(r.freqs[i]) : "nan");
        for (std::size_t i = 0; i < nf; ++i) {
            const bool ok = r.error.empty() && reference_error.empty();
            out += "," + (ok ? detail::fmt(r.freqs[i] - reference[i]) : "nan");
        }
        out += r.error.empty() ? ",ok\n" : ",labeling-failure\n";
    }
    return out;
}

std::string cmd_klsweep(const RunConfig& cfg) {
    const SpinSystem sys = system_of(cfg);
    const CodeFamily family = cfg.family.empty() ? (sys.nucleus == Spin{9} ? CodeFamily::Ideal92 : CodeFamily::Ideal72)
                                                 : parse_family(cfg.family);
    SweepConfig sc;
    sc.family = family;
    sc.threads = cfg.threads;
    sc.options.half_width = cfg.half_width;
    sc.options.grid_cells = cfg.cells;
    std::string mode;
    if (family == CodeFamily::Ideal72 || family == CodeFamily::Ideal92) {
        sc.mode = SweepMode::Fixed;
        mode = "ideal code-word, no tailoring";
    } else if (cfg.freeze_at) {
        sc.mode = SweepMode::Frozen;
        sc.freeze_at = *cfg.freeze_at;
        mode = "code-word frozen at the " + detail::fmt(*cfg.freeze_at) + " T tailoring solution";
    } else {
        sc.mode = SweepMode::Resolve;
        mode = "tailoring re-solved at every field";
    }
    const auto rows = field_sweep_tailoring(sys, cfg.grid.values(), sc);
    return sweep_to_csv(rows, "KL residuals vs field for the " + std::string(family_name(family)) + " code (" + mode +
                                  "); " + describe(cfg, sys));
}

std::string cmd_tailor(const RunConfig& cfg) {
    const SpinSystem sys = system_of(cfg);
    const CodeFamily family = family_of(cfg, sys);
    TailorOptions opt;
    opt.half_width = cfg.half_width;
    opt.grid_cells = cfg.cells;
    const auto t0 = std::chrono::steady_clock::now();
    const TailoringSolution sol = solve_tailoring(family, sys, cfg.field, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json j = nlohmann::json::parse(sol.to_json());
    j["runtime_s"] = secs;
    return j.dump(2) + "\n";
}

std::string cmd_contour(const RunConfig& cfg) {
    const SpinSystem sys = system_of(cfg);
    const CodeFamily family = family_of(cfg, sys);
    std::vector<Condition> conds;
    for (const auto& c : cfg.conditions) conds.push_back(parse_condition(c));
    if (conds.empty()) {
        if (sys.nucleus == Spin{9}) {
            conds = {Condition::DiagIZ, Condition::DiagIXIX};
        } else {
            conds = {Condition::DiagIZ, Condition::OffdiagIXIX, Condition::OffdiagIXIY};
        }
    }
    const TailoringProblem prob(family, sys, cfg.field);
    const Box box = Box::square(cfg.half_width);
    const double step = 2.0 * cfg.half_width / cfg.cells;

    std::vector<std::vector<Polyline>> lines(conds.size());
    std::vector<std::string> empty;
    for (std::size_t k = 0; k < conds.size(); ++k) {
        try {
            lines[k] = trace_zero_contour(prob.residual(conds[k]), box, step);
        } catch (const EmptyContourError&) {
            empty.push_back(std::string(condition_name(conds[k])));
        }
    }
    std::string out = "# zero contours of KL conditions over distortion angles (eps1, eps2) for the " +
                      std::string(family_name(family)) + " code at " + detail::fmt(cfg.field) + " T; system=" +
                      sys.name + "; rows with kind=intersection list pairwise crossings\n";
    out += "kind,condition,polyline,eps1_rad,eps2_rad\n";
    for (std::size_t k = 0; k < conds.size(); ++k)
        for (std::size_t p = 0; p < lines[k].size(); ++p)
            for (const auto& pt : lines[k][p])
                out += "contour," + std::string(condition_name(conds[k])) + "," + std::to_string(p) + "," +
                       detail::fmt(pt.e1) + "," + detail::fmt(pt.e2) + "\n";
    for (std::size_t a = 0; a < conds.size(); ++a)
        for (std::size_t b = a + 1; b < conds.size(); ++b)
            for (const auto& pt : contour_intersections(lines[a], lines[b]))
                out += "intersection," + std::string(condition_name(conds[a])) + "&" +
                       std::string(condition_name(conds[b])) + ",-1," + detail::fmt(pt.e1) + "," + detail::fmt(pt.e2) +
                       "\n";
    for (const auto& e : empty) out += "empty," + e + ",-1,nan,nan\n";
    return out;
}

std::string cmd_kl(const RunConfig& cfg) {
    const CodeFamily family = cfg.family.empty() ? CodeFamily::Ideal72 : parse_family(cfg.family);
    CodeWord cw;
    if (family == CodeFamily::Spin232 || family == CodeFamily::ThreeQudit || cfg.system == "ideal") {
        cw = make_codeword(family);
    } else {
        cw = make_dressed_codeword(family, system_of(cfg), Field::axial(cfg.field));
    }
    const ErrorSetKind kind = (family == CodeFamily::Spin232 || family == CodeFamily::ThreeQudit)
                                  ? ErrorSetKind::FirstOrderEB
                                  : ErrorSetKind::FirstOrderB;
    const KLReport r = kl_residuals(cw, error_set_for(cw, kind));
    nlohmann::json j = nlohmann::json::parse(r.to_json());
    j["family"] = std::string(family_name(family));
    j["basis"] = cw.basis == BasisKind::Dressed ? "dressed" : "ideal";
    if (cw.system) {
        j["system"] = cw.system->name;
        j["field_tesla"] = cfg.field;
    }
    return j.dump() + "\n";
}

std::string cmd_qec(const RunConfig& cfg) {
    const bool exact = cfg.mode == "exact-branch";
    const DecoderMode dm = cfg.mode == "z-biased" ? DecoderMode::ZBiased : DecoderMode::Full;
    const QecSimulator sim(dm);

    std::vector<ErrorEvent> pool;
    for (const auto& e : correctable_errors()) {
        if (dm == DecoderMode::ZBiased && e.op != "1" && e.op.find('Z') == std::string::npos) continue;
        pool.push_back(e);
    }
    const bool random_error = cfg.error == "random";
    const ErrorEvent fixed = random_error ? ErrorEvent{} : ErrorEvent::parse(cfg.error);

    std::string out;
    if (exact) {
        const auto grid = bloch_grid();
        double min_fid = 1.0, max_uncorrectable = 0.0;
        for (const auto& [alpha, beta] : grid) {
            QuditRegister reg = sim.encode(alpha, beta);
            apply_error(reg, fixed);
            const BranchResult br = sim.detect_exact(reg, alpha, beta);
            nlohmann::json j;
            j["error"] = fixed.label();
            j["alpha"] = cjson(alpha);
            j["beta"] = cjson(beta);
            nlohmann::json branches = nlohmann::json::array();
            for (const auto& b : br.branches) {
                branches.push_back({{"case", b.detected_case},
                                    {"weight", b.weight},
                                    {"fidelity", b.logical_fidelity},
                                    {"ancilla_outcomes", b.ancilla_outcomes}});
                min_fid = std::min(min_fid, b.logical_fidelity);
            }
            j["branches"] = branches;
            j["uncorrectable_weight"] = br.uncorrectable_weight;
            max_uncorrectable = std::max(max_uncorrectable, br.uncorrectable_weight);
            out += j.dump() + "\n";
        }
        nlohmann::json s;
        s["summary"] = {{"mode", cfg.mode},
                        {"error", fixed.label()},
                        {"points", grid.size()},
                        {"min_fidelity", min_fid},
                        {"max_uncorrectable_weight", max_uncorrectable}};
        return out + s.dump() + "\n";
    }

    std::vector<Trajectory> traj(static_cast<std::size_t>(cfg.trajectories));
    detail::parallel_for(traj.size(), cfg.threads, [&](std::size_t k) {
        Trajectory& t = traj[k];
        t.seed = splitmix64(cfg.seed + k);
        std::mt19937_64 rng(t.seed);
        std::normal_distribution<double> normal;
        Complex a{normal(rng), normal(rng)}, b{normal(rng), normal(rng)};
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        t.alpha = a / n;
        t.beta = b / n;
        t.error = random_error ? pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)] : fixed;
        QuditRegister reg = sim.encode(t.alpha, t.beta);
        apply_error(reg, t.error);
        t.record = sim.detect_sampled(reg, t.alpha, t.beta, rng);
    });

    std::map<std::string, std::pair<double, int>> per_error;
    int uncorrectable = 0;
    double total = 0.0;
    for (const auto& t : traj) {
        out += t.to_json() + "\n";
        auto& acc = per_error[t.error.label()];
        acc.first += t.record.logical_fidelity;
        acc.second += 1;
        total += t.record.logical_fidelity;
        if (!t.record.detected) ++uncorrectable;
    }
    nlohmann::json by_error = nlohmann::json::object();
    for (const auto& [label, acc] : per_error) by_error[label] = {{"count", acc.second}, {"mean_fidelity", acc.first / acc.second}};
    nlohmann::json s;
    s["summary"] = {{"mode", cfg.mode},
                    {"seed", cfg.seed},
                    {"trajectories", traj.size()},
                    {"mean_fidelity", traj.empty() ? 0.0 : total / static_cast<double>(traj.size())},
                    {"uncorrectable", uncorrectable},
                    {"by_error", by_error}};
    return out + s.dump() + "\n";
}

std::string cmd_budget(const RunConfig& cfg) {
    ThresholdModel model;
    model.error_probability = cfg.error_probability;
    nlohmann::json j;
    j["counting_rule"] =
        "1 pulse per two-level rotation (controlled or not), 2 per controlled-double-pi, 1 per ancilla "
        "excitation condition; cycle = sum over detection cases of DISENTANGLE + DEC + DETECT + RECOVERY";
    j["threshold_model"] = {{"error_probability", model.error_probability},
                            {"operators_per_qudit", model.operators_per_qudit},
                            {"qudits", model.qudits}};
    for (DecoderMode dm : {DecoderMode::Full, DecoderMode::ZBiased}) {
        const QecSimulator sim(dm);
        const PulseBudget b = sim.pulse_budget();
        const Threshold t = fidelity_threshold(b.cycle, model);
        nlohmann::json cases = nlohmann::json::array();
        for (const auto& [label, n] : b.per_case) cases.push_back({{"case", label}, {"pulses", n}});
        j[dm == DecoderMode::Full ? "full" : "z-biased"] = {
            {"encode_pulses", b.encode},
            {"cycle_pulses", b.cycle},
            {"cases", cases},
            {"dropped_cases", b.dropped},
            {"min_pulse_fidelity", t.min_pulse_fidelity},
            {"max_pulse_infidelity", t.max_pulse_infidelity},
            {"unprotected_survival", t.unprotected_survival},
            {"protected_survival", t.protected_survival},
            {"attainable", t.attainable}};
    }
    j["selected"] = cfg.mode == "z-biased" ? "z-biased" : "full";
    return j.dump(2) + "\n";
}

std::string cmd_blocks(const RunConfig& cfg) {
    const QecSimulator sim(cfg.mode == "z-biased" ? DecoderMode::ZBiased : DecoderMode::Full);
    std::string out = sim.enc().pulse_list_json() + "\n" + sim.entangle().pulse_list_json() + "\n";
    for (const auto& dc : sim.cases())
        for (const Block* b : {&dc.disentangle, &dc.dec, &dc.detect, &dc.recovery}) out += b->pulse_list_json() + "\n";
    return out;
}

std::string run_command(std::string_view command, const RunConfig& cfg) {
    if (command == "levels") return cmd_levels(cfg);
    if (command == "klsweep") return cmd_klsweep(cfg);
    if (command == "tailor") return cmd_tailor(cfg);
    if (command == "contour") return cmd_contour(cfg);
    if (command == "kl") return cmd_kl(cfg);
    if (command == "qec") return cmd_qec(cfg);
    if (command == "budget") return cmd_budget(cfg);
    if (command == "blocks") return cmd_blocks(cfg);
    throw PreconditionError("unknown command '" + std::string(command) + "'");
}

}  // namespace spinqec
