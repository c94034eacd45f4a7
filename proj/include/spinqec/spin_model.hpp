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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spinqec/linalg.hpp"

namespace spinqec {

/// A half-integer spin quantum number, stored as 2j.
struct Spin {
    int twice = 1;

    /// Accepts "7/2", "3.5", "1".
    static Spin parse(std::string_view text);
    static Spin from_value(double j);

    double value() const { return 0.5 * twice; }
    std::size_t dim() const { return static_cast<std::size_t>(twice) + 1; }
    /// Index of projection m in the ascending basis m = -j ... +j.
    std::size_t index_of(double m) const;
    double projection(std::size_t index) const { return -value() + static_cast<double>(index); }

    friend bool operator==(Spin a, Spin b) { return a.twice == b.twice; }
};

struct SpinOperators {
    ComplexMatrix x;
    ComplexMatrix y;
    ComplexMatrix z;
};

/// Angular-momentum matrices in the ascending-m basis.
SpinOperators spin_operators(Spin j);

struct Field {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Field axial(double tesla) { return {0.0, 0.0, tesla}; }
};

/// Electron spin coupled to a nuclear spin by an isotropic hyperfine term.
/// Gyromagnetic factors in MHz/T, hyperfine constant in MHz.
struct SpinSystem {
    std::string name;
    Spin electron{1};
    Spin nucleus{7};
    double g_e = 0.0;
    double g_n = 0.0;
    double hyperfine = 0.0;

    std::size_t dim() const { return electron.dim() * nucleus.dim(); }
    /// Product-basis index of |m_S> (x) |m_I>.
    std::size_t index_of(double m_s, double m_i) const {
        return electron.index_of(m_s) * nucleus.dim() + nucleus.index_of(m_i);
    }

    /// "si-sb" / "Si:Sb-123" and "si-bi" / "Si:Bi-209".
    static SpinSystem preset(std::string_view name);
    /// Key-value text: one `key = value` per line, `#` comments.
    /// Keys: name, S, I, g_e_MHz_per_T, g_n_MHz_per_T, A_MHz.
    static SpinSystem parse(std::string_view text);
    static SpinSystem load(const std::string& path);
    /// Preset name, or otherwise a parameter file path.
    static SpinSystem resolve(const std::string& name_or_path);
};

/// g_e B.S + g_n B.I + A S.I on |m_S> (x) |m_I>, MHz.
ComplexMatrix build_hamiltonian(const SpinSystem& sys, Field b);

struct ProductLabel {
    double m_s = 0.0;
    double m_i = 0.0;

    friend bool operator==(const ProductLabel&, const ProductLabel&) = default;
};

struct DressedState {
    CVector vector;
    ProductLabel label;
    double dominant_weight = 0.0;
    double energy = 0.0;
};

/// Eigenstates in ascending energy, each labeled by the product state it
/// overlaps most. Labels are assigned greedily in order of decreasing
/// overlap; a label contested by two states within 1e-6 raises
/// LabelingError.
std::vector<DressedState> dressed_eigenstates(const SpinSystem& sys, Field b);

const DressedState& find_state(const std::vector<DressedState>& states, ProductLabel label);

/// E(m_s, m_I = k+1) - E(m_s, m_I = k) for the 2I adjacent pairs, MHz.
std::vector<double> nuclear_transition_frequencies(const SpinSystem& sys, double b_z, double m_s);

/// Central-difference d f_k / d B_z, MHz/T.
std::vector<double> transition_frequency_gradients(const SpinSystem& sys, double b_z, double m_s,
                                                   double delta = 1e-4);

}  // namespace spinqec
