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

#include "spinqec/qec_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include "json.hpp"
#include "spinqec/codeword.hpp"
#include "spinqec/spin_model.hpp"

namespace spinqec {

namespace {

constexpr double kPi = std::numbers::pi;

ProductState decode_index(std::size_t idx, int* ancilla = nullptr) {
    if (ancilla) *ancilla = static_cast<int>(idx % 2);
    const std::size_t q = idx / 2;
    return {static_cast<int>(q / 64), static_cast<int>((q / 8) % 8), static_cast<int>(q % 8)};
}

int level_on(const ProductState& s, int qudit) { return qudit == 0 ? s.a : (qudit == 1 ? s.b : s.c); }

void set_level(ProductState& s, int qudit, int level) {
    (qudit == 0 ? s.a : (qudit == 1 ? s.b : s.c)) = level;
}

void check_level(int level) {
    if (level < 0 || level >= kLevels) throw PreconditionError("qudit level " + std::to_string(level) + " out of range");
}

void check_qudit(int qudit) {
    if (qudit < 0 || qudit > 2) throw PreconditionError("qudit index " + std::to_string(qudit) + " out of range");
}

bool controls_hold(const ProductState& s, const std::vector<Control>& controls) {
    for (const auto& c : controls)
        if (level_on(s, c.qudit) != c.level) return false;
    return true;
}

void rotate_pair(std::span<Complex> amps, std::size_t i1, std::size_t i2, double c, double s) {
    const Complex x = amps[i1], y = amps[i2];
    amps[i1] = c * x - s * y;
    amps[i2] = s * x + c * y;
}

void apply_rotation(std::span<Complex> amps, int qudit, int l1, int l2, double theta,
                    const std::vector<Control>& controls) {
    const double c = std::cos(theta), s = std::sin(theta);
    for (int u = 0; u < kLevels; ++u)
        for (int v = 0; v < kLevels; ++v) {
            ProductState st;
            // Fill the two non-target qudits with (u, v) in order.
            int k = 0;
            for (int q = 0; q < 3; ++q) {
                if (q == qudit) continue;
                set_level(st, q, k++ == 0 ? u : v);
            }
            if (!controls_hold(st, controls)) continue;
            ProductState s1 = st, s2 = st;
            set_level(s1, qudit, l1);
            set_level(s2, qudit, l2);
            for (int anc = 0; anc < 2; ++anc)
                rotate_pair(amps, register_index(s1, anc), register_index(s2, anc), c, s);
        }
}

}  // namespace

std::size_t register_index(ProductState s, int ancilla) {
    return ((static_cast<std::size_t>(s.a) * 8 + s.b) * 8 + s.c) * 2 + ancilla;
}

QuditRegister::QuditRegister() : amps_(kRegisterDim, Complex{0.0, 0.0}) { amps_[0] = 1.0; }

QuditRegister::QuditRegister(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() != kRegisterDim) {
        throw PreconditionError("register needs " + std::to_string(kRegisterDim) + " amplitudes, got " +
                                std::to_string(amps_.size()));
    }
}

QuditRegister QuditRegister::basis(ProductState s, int ancilla) {
    check_level(s.a);
    check_level(s.b);
    check_level(s.c);
    CVector v(kRegisterDim, Complex{0.0, 0.0});
    v[register_index(s, ancilla)] = 1.0;
    return QuditRegister(std::move(v));
}

double QuditRegister::norm() const { return spinqec::norm(amps_); }

void QuditRegister::normalize() { spinqec::normalize(amps_); }

double QuditRegister::ancilla_excited_probability() const {
    double p = 0.0, total = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        total += std::norm(amps_[i]);
        if (i % 2 == 1) p += std::norm(amps_[i]);
    }
    return total > 0.0 ? p / total : 0.0;
}

double QuditRegister::project_ancilla(int outcome) {
    double total = 0.0, kept = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        total += std::norm(amps_[i]);
        if (static_cast<int>(i % 2) == outcome) {
            kept += std::norm(amps_[i]);
        } else {
            amps_[i] = 0.0;
        }
    }
    if (kept == 0.0) throw NumericalError("ancilla outcome " + std::to_string(outcome) + " has zero probability");
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& z : amps_) z *= scale;
    return kept / total;
}

QuditRegister init_register(Complex alpha, Complex beta) {
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > 1e-10) throw PreconditionError("init_register: |alpha|^2 + |beta|^2 must be 1");
    CVector v(kRegisterDim, Complex{0.0, 0.0});
    v[register_index({0, 0, 0})] = alpha;
    v[register_index({1, 0, 0})] = beta;
    return QuditRegister(std::move(v));
}

Gate Gate::rotation(int qudit, int level1, int level2, double theta, std::vector<Control> controls) {
    check_qudit(qudit);
    check_level(level1);
    check_level(level2);
    if (level1 == level2) throw PreconditionError("rotation needs two distinct levels");
    for (const auto& c : controls) {
        check_qudit(c.qudit);
        check_level(c.level);
        if (c.qudit == qudit) throw PreconditionError("rotation cannot be controlled on its own qudit");
    }
    Gate g;
    g.kind = Kind::Rotation;
    g.qudit = qudit;
    g.level1 = level1;
    g.level2 = level2;
    g.theta = theta;
    g.controls = std::move(controls);
    return g;
}

Gate Gate::controlled_double_pi(Control control, int target1, int target2, int level1, int level2) {
    check_qudit(control.qudit);
    check_qudit(target1);
    check_qudit(target2);
    check_level(control.level);
    check_level(level1);
    check_level(level2);
    if (target1 == target2 || control.qudit == target1 || control.qudit == target2) {
        throw PreconditionError("controlled-double-pi needs one control and two distinct targets");
    }
    Gate g;
    g.kind = Kind::ControlledDoublePi;
    g.qudit = target1;
    g.targets = {target1, target2};
    g.level1 = level1;
    g.level2 = level2;
    g.theta = kPi / 2;
    g.controls = {control};
    return g;
}

Gate Gate::ancilla_excitation(std::vector<ProductState> conditions) {
    for (const auto& s : conditions) {
        check_level(s.a);
        check_level(s.b);
        check_level(s.c);
    }
    Gate g;
    g.kind = Kind::AncillaExcitation;
    g.theta = kPi / 2;
    g.conditions = std::move(conditions);
    return g;
}

Gate Gate::inverse() const {
    Gate g = *this;
    g.theta = -theta;
    return g;
}

int Gate::pulses() const {
    switch (kind) {
        case Kind::Rotation:
            return 1;
        case Kind::ControlledDoublePi:
            return 2;
        case Kind::AncillaExcitation:
            return static_cast<int>(conditions.size());
    }
    return 0;
}

bool Gate::is_pi() const { return std::abs(std::abs(theta) - kPi / 2) < 1e-12; }

void apply_gate(std::span<Complex> amps, const Gate& g) {
    if (amps.size() != kRegisterDim) throw PreconditionError("apply_gate: register has wrong dimension");
    switch (g.kind) {
        case Gate::Kind::Rotation:
            apply_rotation(amps, g.qudit, g.level1, g.level2, g.theta, g.controls);
            break;
        case Gate::Kind::ControlledDoublePi:
            apply_rotation(amps, g.targets[0], g.level1, g.level2, g.theta, g.controls);
            apply_rotation(amps, g.targets[1], g.level1, g.level2, g.theta, g.controls);
            break;
        case Gate::Kind::AncillaExcitation: {
            const double c = std::cos(g.theta), s = std::sin(g.theta);
            for (const auto& st : g.conditions) rotate_pair(amps, register_index(st, 0), register_index(st, 1), c, s);
            break;
        }
    }
}

void apply_gate(QuditRegister& reg, const Gate& g) { apply_gate(std::span<Complex>(reg.amplitudes()), g); }

int Block::pulses() const {
    int n = 0;
    for (const auto& g : gates) n += g.pulses();
    return n;
}

Block Block::inverse(std::string new_name) const {
    Block b;
    b.name = std::move(new_name);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) b.gates.push_back(it->inverse());
    for (const auto& [in, out] : target_map) b.target_map.emplace_back(out, in);
    return b;
}

void Block::apply(std::span<Complex> amps) const {
    for (const auto& g : gates) apply_gate(amps, g);
}

void Block::apply(QuditRegister& reg) const { apply(std::span<Complex>(reg.amplitudes())); }

double Block::min_fidelity() const {
    double f = 1.0;
    for (const auto& [in, out] : target_map) {
        CVector v = in;
        apply(v);
        f = std::min(f, fidelity(out, v));
    }
    return f;
}

double Block::max_deviation() const {
    double d = 0.0;
    for (const auto& [in, out] : target_map) {
        CVector v = in;
        apply(v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= out[i];
        d = std::max(d, spinqec::norm(v));
    }
    return d;
}

ComplexMatrix Block::matrix() const {
    ComplexMatrix m(kRegisterDim, kRegisterDim);
    CVector v(kRegisterDim);
    for (std::size_t j = 0; j < kRegisterDim; ++j) {
        std::fill(v.begin(), v.end(), Complex{0.0, 0.0});
        v[j] = 1.0;
        apply(v);
        for (std::size_t i = 0; i < kRegisterDim; ++i) m(i, j) = v[i];
    }
    return m;
}

double Block::unitarity_defect() const {
    // Columns of a pulse sequence are sparse; accumulate U^dagger U row by row.
    std::vector<std::vector<std::pair<std::size_t, Complex>>> rows(kRegisterDim);
    CVector v(kRegisterDim);
    for (std::size_t j = 0; j < kRegisterDim; ++j) {
        std::fill(v.begin(), v.end(), Complex{0.0, 0.0});
        v[j] = 1.0;
        apply(v);
        for (std::size_t i = 0; i < kRegisterDim; ++i)
            if (v[i] != Complex{0.0, 0.0}) rows[i].emplace_back(j, v[i]);
    }
    std::vector<Complex> gram(kRegisterDim * kRegisterDim, Complex{0.0, 0.0});
    for (const auto& row : rows)
        for (const auto& [a, ua] : row)
            for (const auto& [b, ub] : row) gram[a * kRegisterDim + b] += std::conj(ua) * ub;
    double worst = 0.0;
    for (std::size_t a = 0; a < kRegisterDim; ++a)
        for (std::size_t b = 0; b < kRegisterDim; ++b)
            worst = std::max(worst, std::abs(gram[a * kRegisterDim + b] - (a == b ? 1.0 : 0.0)));
    return worst;
}

std::string Block::pulse_list_json() const {
    static const char* names = "ABC";
    nlohmann::json list = nlohmann::json::array();
    for (const auto& g : gates) {
        nlohmann::json j;
        nlohmann::json controls = nlohmann::json::array();
        for (const auto& c : g.controls)
            controls.push_back({{"qudit", std::string(1, names[c.qudit])}, {"m", projection_of(c.level)}});
        switch (g.kind) {
            case Gate::Kind::Rotation:
                j["kind"] = "rotation";
                j["qudit"] = std::string(1, names[g.qudit]);
                j["levels"] = {projection_of(g.level1), projection_of(g.level2)};
                break;
            case Gate::Kind::ControlledDoublePi:
                j["kind"] = "controlled-double-pi";
                j["qudits"] = {std::string(1, names[g.targets[0]]), std::string(1, names[g.targets[1]])};
                j["levels"] = {projection_of(g.level1), projection_of(g.level2)};
                break;
            case Gate::Kind::AncillaExcitation: {
                j["kind"] = "ancilla-excitation";
                nlohmann::json conds = nlohmann::json::array();
                for (const auto& s : g.conditions)
                    conds.push_back({projection_of(s.a), projection_of(s.b), projection_of(s.c)});
                j["conditions"] = conds;
                break;
            }
        }
        j["axis"] = "y";
        j["angle"] = g.theta;
        j["controls"] = controls;
        j["pulses"] = g.pulses();
        list.push_back(j);
    }
    return nlohmann::json{{"block", name}, {"pulses", pulses()}, {"gates", list}}.dump();
}

Block concatenate(std::string name, const std::vector<const Block*>& parts) {
    Block b;
    b.name = std::move(name);
    for (const Block* p : parts) b.gates.insert(b.gates.end(), p->gates.begin(), p->gates.end());
    return b;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

constexpr double kAmpTol = 1e-13;

struct SynthesisFailure {
    std::string reason;
};

enum class Schedule { PhaseSplit, Sequential };

class Reducer {
   public:
    Reducer(std::vector<CVector> states, std::vector<ProductState> pivots, std::size_t max_gates)
        : cur_(std::move(states)), pivots_(std::move(pivots)), max_gates_(max_gates) {}

    void run(Schedule schedule) {
        const std::size_t n = cur_.size();
        if (schedule == Schedule::Sequential) {
            for (std::size_t i = 0; i < n; ++i) {
                disentangle(i);
                chain(i);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) disentangle(i);
            for (std::size_t i = 0; i < n; ++i) chain(i);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = register_index(pivots_[i]);
            for (std::size_t k = 0; k < kRegisterDim; ++k) {
                const Complex want = k == p ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
                if (std::abs(cur_[i][k] - want) > 1e-9) throw SynthesisFailure{"state did not reach its pivot"};
            }
        }
    }

    std::vector<Gate> gates;
    std::vector<int> phase;

   private:
    double amp(std::size_t i, const ProductState& s) const {
        const Complex z = cur_[i][register_index(s)];
        if (std::abs(z.imag()) > 1e-10) throw SynthesisFailure{"complex amplitude"};
        return z.real();
    }

    void push(const Gate& g, int ph) {
        if (gates.size() >= max_gates_) throw SynthesisFailure{"gate cap exceeded"};
        for (auto& s : cur_) apply_gate(std::span<Complex>(s), g);
        gates.push_back(g);
        phase.push_back(ph);
    }

    bool touches_reduced(int qudit, int l1, int l2, const std::vector<Control>& controls) const {
        for (const auto& p : reduced_) {
            const int lv = level_on(p, qudit);
            if ((lv == l1 || lv == l2) && controls_hold(p, controls)) return true;
        }
        return false;
    }

    // Moves the amplitude of `from` into `to` (same state except on `qudit`).
    void merge(std::size_t i, int qudit, const ProductState& from, const ProductState& to,
               const std::vector<Control>& controls, bool force_positive, int ph) {
        const double x = amp(i, from);
        if (std::abs(x) < kAmpTol) return;
        const int lf = level_on(from, qudit), lt = level_on(to, qudit);
        if (touches_reduced(qudit, lf, lt, controls)) throw SynthesisFailure{"merge would disturb a finished pivot"};
        const double y = amp(i, to);
        double r = std::hypot(x, y);
        if (!force_positive && ((std::abs(y) >= kAmpTol && y < 0.0) || (std::abs(y) < kAmpTol && x < 0.0))) r = -r;
        push(Gate::rotation(qudit, lf, lt, std::atan2(x / r, y / r), controls), ph);
    }

    std::vector<std::size_t> support(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < kRegisterDim; ++k) {
            if (std::abs(cur_[i][k]) < kAmpTol) continue;
            if (k % 2 != 0) throw SynthesisFailure{"state has ancilla support"};
            out.push_back(k);
        }
        return out;
    }

    void disentangle(std::size_t i) {
        const ProductState& p = pivots_[i];
        for (std::size_t k : support(i)) {
            const ProductState s = decode_index(k);
            if (s.b == p.b) continue;
            ProductState t = s;
            t.b = p.b;
            merge(i, 1, s, t, {{0, s.a}, {2, s.c}}, false, 1);
        }
        for (std::size_t k : support(i)) {
            const ProductState s = decode_index(k);
            if (s.b != p.b) throw SynthesisFailure{"B level not settled"};
            if (s.c == p.c) continue;
            ProductState t = s;
            t.c = p.c;
            merge(i, 2, s, t, {{0, s.a}, {1, s.b}}, false, 1);
        }
    }

    void chain(std::size_t i) {
        const ProductState& p = pivots_[i];
        std::vector<int> nodes;
        for (std::size_t k : support(i)) {
            const ProductState s = decode_index(k);
            if (s.b != p.b || s.c != p.c) throw SynthesisFailure{"support outside the pivot slice"};
            if (s.a != p.a) nodes.push_back(s.a);
        }
        std::stable_sort(nodes.begin(), nodes.end(), [&](int u, int v) {
            const int du = std::abs(u - p.a), dv = std::abs(v - p.a);
            return du != dv ? du > dv : u < v;
        });
        const std::vector<Control> slice{{1, p.b}, {2, p.c}};
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const int to_level = k + 1 < nodes.size() ? nodes[k + 1] : p.a;
            ProductState from = p, to = p;
            from.a = nodes[k];
            to.a = to_level;
            merge(i, 0, from, to, slice, k + 1 == nodes.size(), 2);
        }
        if (amp(i, p) < 0.0) {
            int free_level = -1;
            for (int l = 0; l < kLevels && free_level < 0; ++l)
                if (l != p.a && !touches_reduced(0, p.a, l, slice)) free_level = l;
            if (free_level < 0) throw SynthesisFailure{"no free level for the sign fix"};
            push(Gate::rotation(0, p.a, free_level, kPi, slice), 2);
        }
        reduced_.push_back(p);
    }

    std::vector<CVector> cur_;
    std::vector<ProductState> pivots_;
    std::vector<ProductState> reduced_;
    std::size_t max_gates_;
};

std::optional<ProductState> as_basis(const CVector& v) {
    std::optional<ProductState> hit;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) < 1e-12) continue;
        if (hit || k % 2 != 0 || std::abs(v[k] - Complex{1.0, 0.0}) > 1e-12) return std::nullopt;
        hit = decode_index(k);
    }
    return hit;
}

struct Synthesized {
    std::vector<Gate> gates;
    std::vector<int> phase;
};

Synthesized synthesize_gates(const std::vector<std::pair<CVector, CVector>>& map, const SynthesisOptions& options) {
    const std::size_t n = map.size();
    if (n == 0) return {};
    for (const auto& [in, out] : map) {
        if (in.size() != kRegisterDim || out.size() != kRegisterDim) {
            throw PreconditionError("synthesize_block: states must have dimension " + std::to_string(kRegisterDim));
        }
        for (const CVector* v : {&in, &out})
            for (const auto& z : *v)
                if (std::abs(z.imag()) > 1e-12) throw PreconditionError("synthesize_block: amplitudes must be real");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Complex gi = inner(map[i].first, map[j].first);
            const Complex go = inner(map[i].second, map[j].second);
            const Complex want = i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(gi - want) > 1e-10 || std::abs(go - want) > 1e-10) {
                throw PreconditionError("synthesize_block: target map is not orthonormal on both sides");
            }
        }

    std::vector<ProductState> pivots;
    bool inputs_basis = true, outputs_basis = true;
    for (const auto& [in, out] : map) {
        inputs_basis = inputs_basis && as_basis(in).has_value();
        outputs_basis = outputs_basis && as_basis(out).has_value();
    }
    for (const auto& [in, out] : map) {
        if (inputs_basis) {
            pivots.push_back(*as_basis(in));
        } else if (outputs_basis) {
            pivots.push_back(*as_basis(out));
        } else {
            std::size_t best = 0;
            for (std::size_t k = 0; k < kRegisterDim; k += 2)
                if (std::abs(in[k]) > std::abs(in[best])) best = k;
            pivots.push_back(decode_index(best));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pivots[i] == pivots[j]) throw NumericalError("synthesize_block: two states share a pivot");

    std::string last_failure;
    for (Schedule schedule : {Schedule::PhaseSplit, Schedule::Sequential}) {
        try {
            std::vector<CVector> ins, outs;
            for (const auto& [in, out] : map) {
                ins.push_back(in);
                outs.push_back(out);
            }
            Reducer forward(ins, pivots, options.max_gates);
            forward.run(schedule);
            Reducer backward(outs, pivots, options.max_gates);
            backward.run(schedule);
            Synthesized s{forward.gates, forward.phase};
            for (auto it = backward.gates.rbegin(); it != backward.gates.rend(); ++it) {
                s.gates.push_back(it->inverse());
                s.phase.push_back(2);
            }
            if (s.gates.size() > options.max_gates) throw SynthesisFailure{"gate cap exceeded"};
            Block check;
            check.gates = s.gates;
            check.target_map = map;
            if (check.max_deviation() > 1e-9 || check.min_fidelity() < 1.0 - options.tolerance) {
                throw SynthesisFailure{"validation against the target map failed"};
            }
            return s;
        } catch (const SynthesisFailure& f) {
            last_failure = f.reason;
        }
    }
    throw NumericalError("synthesize_block: " + last_failure);
}

}  // namespace

Block synthesize_block(std::string name, std::vector<std::pair<CVector, CVector>> target_map,
                       const SynthesisOptions& options) {
    Synthesized s = synthesize_gates(target_map, options);
    Block b;
    b.name = std::move(name);
    b.gates = std::move(s.gates);
    b.target_map = std::move(target_map);
    return b;
}

SplitBlock synthesize_split_block(std::string_view label, std::vector<std::pair<CVector, CVector>> target_map,
                                  const SynthesisOptions& options) {
    Synthesized s = synthesize_gates(target_map, options);
    SplitBlock out;
    out.disentangle.name = "DISENTANGLE(" + std::string(label) + ")";
    out.dec.name = "DEC(" + std::string(label) + ")";
    std::size_t k = 0;
    while (k < s.gates.size() && s.phase[k] == 1) out.disentangle.gates.push_back(s.gates[k++]);
    while (k < s.gates.size()) out.dec.gates.push_back(s.gates[k++]);
    out.dec.target_map = std::move(target_map);
    return out;
}

// ---------------------------------------------------------------------------
// Code words and fixed blocks

namespace {

// Per-qudit code-word amplitudes on A (with B, C following A after ENTANGLE).
const std::vector<std::pair<double, double>>& zero_terms() {
    static const std::vector<std::pair<double, double>> t{
        {-3.5, std::sqrt(2.0 / 16.0)}, {-1.5, std::sqrt(7.0 / 16.0)}, {2.5, std::sqrt(7.0 / 16.0)}};
    return t;
}

const std::vector<std::pair<double, double>>& one_terms() {
    static const std::vector<std::pair<double, double>> t{
        {3.5, std::sqrt(2.0 / 16.0)}, {1.5, std::sqrt(7.0 / 16.0)}, {-2.5, -std::sqrt(7.0 / 16.0)}};
    return t;
}

CVector a_only(const std::vector<std::pair<double, double>>& terms) {
    CVector v(kRegisterDim, Complex{0.0, 0.0});
    for (auto [m, a] : terms) v[register_index({level_of(m), 0, 0})] = a;
    return v;
}

CVector entangled(const std::vector<std::pair<double, double>>& terms) {
    CVector v(kRegisterDim, Complex{0.0, 0.0});
    for (auto [m, a] : terms) {
        const int l = level_of(m);
        v[register_index({l, l, l})] = a;
    }
    return v;
}

CVector basis_vector(ProductState s, int anc = 0) {
    CVector v(kRegisterDim, Complex{0.0, 0.0});
    v[register_index(s, anc)] = 1.0;
    return v;
}

}  // namespace

std::pair<CVector, CVector> register_codewords() { return {entangled(zero_terms()), entangled(one_terms())}; }

Block enc_block() {
    return synthesize_block("ENC", {{basis_vector({0, 0, 0}), a_only(zero_terms())},
                                    {basis_vector({1, 0, 0}), a_only(one_terms())}});
}

Block entangle_block() {
    Block b;
    b.name = "ENTANGLE";
    for (double m : {-1.5, 2.5, 3.5, 1.5, -2.5}) {
        b.gates.push_back(Gate::controlled_double_pi({0, level_of(m)}, 1, 2, 0, level_of(m)));
    }
    auto [z, o] = register_codewords();
    b.target_map = {{a_only(zero_terms()), z}, {a_only(one_terms()), o}};
    return b;
}

// ---------------------------------------------------------------------------
// Errors

std::string ErrorEvent::label() const {
    if (op == "1") return "I";
    return op + "_" + std::string(1, static_cast<char>('A' + qudit));
}

ErrorEvent ErrorEvent::parse(std::string_view label) {
    if (label == "I" || label == "1" || label == "none") return ErrorEvent{0, "1", 1.0};
    const auto us = label.find('_');
    if (us == std::string_view::npos || us + 2 != label.size() || label[us + 1] < 'A' || label[us + 1] > 'C') {
        throw PreconditionError("error label '" + std::string(label) + "' is not of the form OP_Q (e.g. XZ_B)");
    }
    const std::string op(label.substr(0, us));
    static const char* ops[] = {"X", "Y", "Z", "XX", "XY", "XZ", "YY", "YZ", "ZZ"};
    if (std::find_if(std::begin(ops), std::end(ops), [&](const char* o) { return op == o; }) == std::end(ops)) {
        throw PreconditionError("unknown error operator '" + op + "'");
    }
    return ErrorEvent{label[us + 1] - 'A', op, 1.0};
}

std::vector<ErrorEvent> correctable_errors() {
    std::vector<ErrorEvent> out;
    for (int q = 0; q < 3; ++q)
        for (const char* op : {"1", "X", "Y", "Z", "XX", "XY", "XZ", "YY", "YZ", "ZZ"}) out.push_back({q, op, 1.0});
    return out;
}

CVector apply_error_operator(std::span<const Complex> amps, const ErrorEvent& e) {
    check_qudit(e.qudit);
    static const ErrorSet single = standard_error_set(ErrorSetKind::FirstOrderEB, Spin{7});
    const Operator& local = single.find(e.op);
    const Operator embedded(e.op, local.local(), {8, 8, 8, 2}, static_cast<std::size_t>(e.qudit));
    return embedded.apply(amps);
}

double apply_error(QuditRegister& reg, const ErrorEvent& e) {
    if (e.weight < 0.0) throw PreconditionError("error weight must be nonnegative");
    CVector v = apply_error_operator(reg.amplitudes(), e);
    const double n2 = std::norm(spinqec::norm(v));
    if (n2 < 1e-28) throw AnnihilationError("error " + e.label() + " annihilates the state");
    reg = QuditRegister(std::move(v));
    reg.normalize();
    return n2;
}

// ---------------------------------------------------------------------------
// Detection

namespace {

std::vector<ErrorEvent> case_order(DecoderMode mode) {
    std::vector<ErrorEvent> out{{0, "1", 1.0}};
    if (mode == DecoderMode::Full) {
        for (int q = 0; q < 3; ++q)
            for (const char* op : {"X", "Y", "Z"}) out.push_back({q, op, 1.0});
        for (int q = 0; q < 3; ++q)
            for (const char* op : {"XX", "XY", "XZ", "YY", "YZ", "ZZ"}) out.push_back({q, op, 1.0});
    } else {
        for (int q = 0; q < 3; ++q) out.push_back({q, "Z", 1.0});
        for (int q = 0; q < 3; ++q)
            for (const char* op : {"XZ", "YZ", "ZZ"}) out.push_back({q, op, 1.0});
    }
    return out;
}

void project_out(CVector& v, const std::vector<CVector>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) {
            const Complex c = inner(b, v);
            for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * b[k];
        }
}

}  // namespace

QecSimulator::QecSimulator(DecoderMode mode) : mode_(mode) {
    enc_ = enc_block();
    entangle_ = entangle_block();
    std::tie(zero_l_, one_l_) = register_codewords();

    const ProductState lo{0, 0, 0}, hi{7, 0, 0};
    std::vector<CVector> basis;
    for (const ErrorEvent& e : case_order(mode)) {
        const std::string label = e.label();
        CVector w0 = apply_error_operator(zero_l_, e);
        CVector w1 = apply_error_operator(one_l_, e);
        const double raw = std::max(spinqec::norm(w0), spinqec::norm(w1));
        if (raw == 0.0) {
            dropped_.push_back(label);
            continue;
        }
        project_out(w0, basis);
        project_out(w1, basis);
        const double n0 = spinqec::norm(w0), n1 = spinqec::norm(w1);
        if (n0 < 1e-12 * raw && n1 < 1e-12 * raw) {
            dropped_.push_back(label);
            continue;
        }
        if (std::abs(n0 - n1) > 1e-9 * raw || std::abs(inner(w0, w1)) > 1e-9 * raw * raw) {
            throw NumericalError("case " + label + ": projected images are not an orthogonal equal-norm pair");
        }
        for (auto& z : w0) z /= n0;
        for (auto& z : w1) z /= n1;
        std::size_t big = 0;
        for (std::size_t k = 0; k < w0.size(); ++k)
            if (std::abs(w0[k]) > std::abs(w0[big])) big = k;
        const Complex phase = std::conj(w0[big]) / std::abs(w0[big]);
        for (auto& z : w0) z *= phase;
        for (auto& z : w1) z *= phase;
        for (auto& z : w0) z = std::abs(z.imag()) < 1e-13 ? Complex{z.real(), 0.0} : z;
        for (auto& z : w1) z = std::abs(z.imag()) < 1e-13 ? Complex{z.real(), 0.0} : z;
        basis.push_back(w0);
        basis.push_back(w1);

        bool has_low = false;
        for (std::size_t k = 0; k < w0.size(); ++k)
            if (std::abs(w0[k]) > 1e-12 && decode_index(k).a == 0) has_low = true;

        DetectionCase dc;
        dc.label = label;
        dc.error = e;
        dc.pivot0 = has_low ? lo : hi;
        dc.pivot1 = has_low ? hi : lo;
        dc.q0 = w0;
        dc.q1 = w1;
        if (e.op == "1") {
            dc.disentangle = entangle_.inverse("DISENTANGLE(I)");
            CVector s0 = w0, s1 = w1;
            dc.disentangle.apply(s0);
            dc.disentangle.apply(s1);
            dc.dec = synthesize_block("DEC(I)", {{s0, basis_vector(dc.pivot0)}, {s1, basis_vector(dc.pivot1)}});
        } else {
            SplitBlock sb =
                synthesize_split_block(label, {{w0, basis_vector(dc.pivot0)}, {w1, basis_vector(dc.pivot1)}});
            dc.disentangle = std::move(sb.disentangle);
            dc.dec = std::move(sb.dec);
        }
        dc.detect.name = "DETECT(" + label + ")";
        dc.detect.gates = {Gate::ancilla_excitation({dc.pivot0, dc.pivot1})};
        dc.recovery = concatenate("", {&dc.disentangle, &dc.dec}).inverse("RECOVERY(" + label + ")");
        cases_.push_back(std::move(dc));
    }
}

QuditRegister QecSimulator::encode(Complex alpha, Complex beta) const {
    QuditRegister reg = init_register(alpha, beta);
    enc_.apply(reg);
    entangle_.apply(reg);
    return reg;
}

namespace {

SyndromeRecord read_out(const QuditRegister& reg, const DetectionCase& dc, Complex alpha, Complex beta) {
    SyndromeRecord r;
    r.detected = true;
    r.detected_case = dc.label;
    Complex a = reg.amplitude(dc.pivot0, 1), b = reg.amplitude(dc.pivot1, 1);
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n > 0.0) {
        a /= n;
        b /= n;
    }
    r.alpha_hat = a;
    r.beta_hat = b;
    r.logical_fidelity = std::norm(std::conj(alpha) * a + std::conj(beta) * b);
    return r;
}

}  // namespace

BranchResult QecSimulator::detect_exact(const QuditRegister& input, Complex alpha, Complex beta) const {
    BranchResult out;
    QuditRegister reg = input;
    reg.normalize();
    double remaining = 1.0;
    std::vector<int> outcomes;
    for (const DetectionCase& dc : cases_) {
        dc.disentangle.apply(reg);
        dc.dec.apply(reg);
        dc.detect.apply(reg);
        const double p1 = reg.ancilla_excited_probability();
        if (remaining * p1 > 1e-12) {
            QuditRegister fired = reg;
            fired.project_ancilla(1);
            SyndromeRecord r = read_out(fired, dc, alpha, beta);
            r.ancilla_outcomes = outcomes;
            r.ancilla_outcomes.push_back(1);
            r.weight = remaining * p1;
            out.branches.push_back(std::move(r));
        }
        remaining *= 1.0 - p1;
        if (remaining <= 1e-15 || p1 >= 1.0 - 1e-15) {
            remaining = std::max(remaining, 0.0);
            break;
        }
        reg.project_ancilla(0);
        outcomes.push_back(0);
        dc.recovery.apply(reg);
    }
    out.uncorrectable_weight = remaining;
    return out;
}

SyndromeRecord QecSimulator::detect_sampled(const QuditRegister& input, Complex alpha, Complex beta,
                                            std::mt19937_64& rng) const {
    QuditRegister reg = input;
    reg.normalize();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<int> outcomes;
    for (const DetectionCase& dc : cases_) {
        dc.disentangle.apply(reg);
        dc.dec.apply(reg);
        dc.detect.apply(reg);
        const double p1 = reg.ancilla_excited_probability();
        if (uniform(rng) < p1) {
            reg.project_ancilla(1);
            outcomes.push_back(1);
            SyndromeRecord r = read_out(reg, dc, alpha, beta);
            r.ancilla_outcomes = std::move(outcomes);
            return r;
        }
        reg.project_ancilla(0);
        outcomes.push_back(0);
        dc.recovery.apply(reg);
    }
    SyndromeRecord r;
    r.detected = false;
    r.ancilla_outcomes = std::move(outcomes);
    return r;
}

PulseBudget QecSimulator::pulse_budget() const {
    PulseBudget b;
    b.encode = enc_.pulses() + entangle_.pulses();
    for (const auto& dc : cases_) {
        b.per_case.emplace_back(dc.label, dc.pulses());
        b.cycle += dc.pulses();
    }
    b.dropped = dropped_;
    return b;
}

Threshold fidelity_threshold(int pulses, const ThresholdModel& model) {
    if (pulses <= 0) throw PreconditionError("fidelity_threshold: pulse count must be positive");
    const double e = model.error_probability;
    if (!(e > 0.0 && e < 1.0)) throw PreconditionError("fidelity_threshold: error probability must be in (0, 1)");
    const int single = model.operators_per_qudit;
    const int all = single * model.qudits;
    Threshold t;
    t.unprotected_survival = std::pow(1.0 - e, single);
    t.protected_survival = std::pow(1.0 - e, all) + all * e * std::pow(1.0 - e, all - 1);
    const double ratio = t.unprotected_survival / t.protected_survival;
    t.attainable = ratio < 1.0;
    t.min_pulse_fidelity = std::exp(std::log(ratio) / pulses);
    t.max_pulse_infidelity = -std::expm1(std::log(ratio) / pulses);
    return t;
}

std::vector<std::pair<Complex, Complex>> bloch_grid() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<std::array<double, 3>> verts;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0}) {
            verts.push_back({0.0, s1, s2 * phi});
            verts.push_back({s1, s2 * phi, 0.0});
            verts.push_back({s2 * phi, 0.0, s1});
        }
    std::vector<std::pair<Complex, Complex>> out;
    for (auto [x, y, z] : verts) {
        const double r = std::sqrt(x * x + y * y + z * z);
        const double theta = std::acos(z / r);
        const double az = std::atan2(y, x);
        out.emplace_back(Complex{std::cos(theta / 2), 0.0}, std::polar(std::sin(theta / 2), az));
    }
    return out;
}

std::string Trajectory::to_json() const {
    auto c = [](Complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
    nlohmann::json j;
    j["seed"] = seed;
    j["error"] = error.label();
    j["alpha"] = c(alpha);
    j["beta"] = c(beta);
    j["ancilla_outcomes"] = record.ancilla_outcomes;
    j["detected"] = record.detected;
    j["detected_case"] = record.detected_case;
    j["recovered"] = {c(record.alpha_hat), c(record.beta_hat)};
    j["fidelity"] = record.logical_fidelity;
    return j.dump();
}

}  // namespace spinqec
