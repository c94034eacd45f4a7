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

#include "spinqec/spin_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spinqec/error.hpp"

namespace spinqec {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw PreconditionError("cannot parse " + std::string(what) + " from '" + t + "'");
    }
    return v;
}

}  // namespace

Spin Spin::from_value(double j) {
    const double twice = 2.0 * j;
    const double r = std::round(twice);
    if (!(j > 0.0) || std::abs(twice - r) > 1e-12 || r > 1000.0) {
        throw PreconditionError("spin must be a positive half-integer, got " + std::to_string(j));
    }
    return Spin{static_cast<int>(r)};
}

Spin Spin::parse(std::string_view text) {
    const std::string t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string::npos) return from_value(parse_number(t, "spin"));
    const double num = parse_number(std::string_view(t).substr(0, slash), "spin numerator");
    const double den = parse_number(std::string_view(t).substr(slash + 1), "spin denominator");
    if (den != 2.0 && den != 1.0) throw PreconditionError("spin denominator must be 1 or 2: '" + t + "'");
    return from_value(num / den);
}

std::size_t Spin::index_of(double m) const {
    const double k = m + value();
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 0.0 || r > twice) {
        throw PreconditionError("projection " + std::to_string(m) + " is not valid for spin " +
                                std::to_string(value()));
    }
    return static_cast<std::size_t>(r);
}

SpinOperators spin_operators(Spin j) {
    if (j.twice <= 0) throw PreconditionError("spin_operators: 2j must be positive");
    const std::size_t d = j.dim();
    const double jj = j.value();
    ComplexMatrix raise(d, d);
    ComplexMatrix jz(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double m = j.projection(k);
        jz(k, k) = m;
        if (k + 1 < d) raise(k + 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
    }
    const ComplexMatrix lower = raise.adjoint();
    SpinOperators ops;
    ops.x = (raise + lower) * Complex{0.5, 0.0};
    ops.y = (raise - lower) * Complex{0.0, -0.5};
    ops.z = std::move(jz);
    return ops;
}

SpinSystem SpinSystem::preset(std::string_view name) {
    if (name == "si-sb" || name == "Si:Sb-123") {
        return SpinSystem{"Si:Sb-123", Spin{1}, Spin{7}, 28020.0, 5.55, 101.52};
    }
    if (name == "si-bi" || name == "Si:Bi-209") {
        return SpinSystem{"Si:Bi-209", Spin{1}, Spin{9}, 28020.0, 6.841, 1475.4};
    }
    throw PreconditionError("unknown system preset '" + std::string(name) + "'");
}

SpinSystem SpinSystem::parse(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) eq = t.find_first_of(" \t");
        if (eq == std::string::npos) {
            throw PreconditionError("system file line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        kv[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw PreconditionError(std::string("system file is missing '") + key + "'");
        return it->second;
    };
    SpinSystem sys;
    sys.name = kv.count("name") ? kv["name"] : "custom";
    sys.electron = Spin::parse(need("S"));
    sys.nucleus = Spin::parse(need("I"));
    sys.g_e = parse_number(need("g_e_MHz_per_T"), "g_e_MHz_per_T");
    sys.g_n = parse_number(need("g_n_MHz_per_T"), "g_n_MHz_per_T");
    sys.hyperfine = parse_number(need("A_MHz"), "A_MHz");
    for (const auto& [key, value] : kv) {
        static const char* known[] = {"name", "S", "I", "g_e_MHz_per_T", "g_n_MHz_per_T", "A_MHz"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw PreconditionError("system file has unknown key '" + key + "'");
        }
    }
    return sys;
}

SpinSystem SpinSystem::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw PreconditionError("cannot open system file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

SpinSystem SpinSystem::resolve(const std::string& name_or_path) {
    if (name_or_path == "si-sb" || name_or_path == "Si:Sb-123" || name_or_path == "si-bi" ||
        name_or_path == "Si:Bi-209") {
        return preset(name_or_path);
    }
    return load(name_or_path);
}

ComplexMatrix build_hamiltonian(const SpinSystem& sys, Field b) {
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.z)) {
        throw PreconditionError("build_hamiltonian: non-finite field");
    }
    const SpinOperators s = spin_operators(sys.electron);
    const SpinOperators n = spin_operators(sys.nucleus);
    const ComplexMatrix es = ComplexMatrix::identity(sys.electron.dim());
    const ComplexMatrix en = ComplexMatrix::identity(sys.nucleus.dim());

    ComplexMatrix electron_field = s.x * Complex{b.x} + s.y * Complex{b.y} + s.z * Complex{b.z};
    ComplexMatrix nuclear_field = n.x * Complex{b.x} + n.y * Complex{b.y} + n.z * Complex{b.z};
    ComplexMatrix h = kron(electron_field, en) * Complex{sys.g_e};
    h += kron(es, nuclear_field) * Complex{sys.g_n};
    if (sys.hyperfine != 0.0) {
        ComplexMatrix contact = kron(s.x, n.x) + kron(s.y, n.y) + kron(s.z, n.z);
        h += contact * Complex{sys.hyperfine};
    }
    return h;
}

std::vector<DressedState> dressed_eigenstates(const SpinSystem& sys, Field b) {
    const EigenDecomposition eig = hermitian_eigendecompose(build_hamiltonian(sys, b));
    const std::size_t d = sys.dim();
    const std::size_t dn = sys.nucleus.dim();

    struct Candidate {
        double weight;
        std::size_t state;
        std::size_t label;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(d * d);
    std::vector<double> weight(d * d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            weight[k * d + i] = std::norm(eig.eigenvectors(i, k));
            candidates.push_back({weight[k * d + i], k, i});
        }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });

    std::vector<std::size_t> label_of(d, d);
    std::vector<bool> label_used(d, false);
    std::size_t assigned = 0;
    for (const Candidate& c : candidates) {
        if (assigned == d) break;
        if (label_of[c.state] != d || label_used[c.label]) continue;
        for (std::size_t other = 0; other < d; ++other) {
            if (other == c.state || label_of[other] != d) continue;
            if (c.weight - weight[other * d + c.label] < 1e-6) {
                throw LabelingError("dressed_eigenstates: states " + std::to_string(c.state) + " and " +
                                    std::to_string(other) + " both claim product label " +
                                    std::to_string(c.label) + " (weight " + std::to_string(c.weight) + ")");
            }
        }
        label_of[c.state] = c.label;
        label_used[c.label] = true;
        ++assigned;
    }

    std::vector<DressedState> out(d);
    for (std::size_t k = 0; k < d; ++k) {
        DressedState& s = out[k];
        s.vector = eig.vector(k);
        s.energy = eig.eigenvalues[k];
        const std::size_t lab = label_of[k];
        s.label = {sys.electron.projection(lab / dn), sys.nucleus.projection(lab % dn)};
        s.dominant_weight = weight[k * d + lab];
    }
    return out;
}

const DressedState& find_state(const std::vector<DressedState>& states, ProductLabel label) {
    for (const auto& s : states)
        if (s.label == label) return s;
    throw PreconditionError("no dressed state with label (" + std::to_string(label.m_s) + ", " +
                            std::to_string(label.m_i) + ")");
}

std::vector<double> nuclear_transition_frequencies(const SpinSystem& sys, double b_z, double m_s) {
    (void)sys.electron.index_of(m_s);
    const auto states = dressed_eigenstates(sys, Field::axial(b_z));
    const std::size_t n = sys.nucleus.dim();
    std::vector<double> f(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double lo = sys.nucleus.projection(k);
        f[k] = find_state(states, {m_s, lo + 1.0}).energy - find_state(states, {m_s, lo}).energy;
    }
    return f;
}

std::vector<double> transition_frequency_gradients(const SpinSystem& sys, double b_z, double m_s, double delta) {
    if (!(delta > 0.0)) throw PreconditionError("gradient step must be positive");
    const auto up = nuclear_transition_frequencies(sys, b_z + delta, m_s);
    const auto down = nuclear_transition_frequencies(sys, b_z - delta, m_s);
    std::vector<double> g(up.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = (up[k] - down[k]) / (2.0 * delta);
    return g;
}

}  // namespace spinqec
