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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinqec/linalg.hpp"
#include "spinqec/spin_model.hpp"

namespace spinqec {

enum class CodeFamily { Ideal72, Distorted72, Ideal92, Tailored92, Spin232, ThreeQudit };

std::string_view family_name(CodeFamily f);
/// Inverse of family_name ("ideal-7/2", "tailored-9/2", ...).
CodeFamily parse_family(std::string_view name);
/// Nuclear spin the family lives on (7/2 for the three-qudit code, per qudit).
Spin family_spin(CodeFamily f);
/// Base angle theta_0 of the two-parameter families; 0 for the others.
double family_theta0(CodeFamily f);

enum class BasisKind { IdealProduct, Dressed };

struct CodeWord {
    CVector zero_l;
    CVector one_l;
    CodeFamily family = CodeFamily::Ideal72;
    BasisKind basis = BasisKind::IdealProduct;
    std::optional<SpinSystem> system;
    Field field;
    double theta0 = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;

    std::size_t dim() const { return zero_l.size(); }
};

/// Code-word over the bare |m> basis (tensor product of three for ThreeQudit).
/// The ideal-* families require eps1 = eps2 = 0.
CodeWord make_codeword(CodeFamily family, double eps1 = 0.0, double eps2 = 0.0);

/// Code-word over dressed eigenstates of `sys` in the m_S = -1/2 manifold.
/// Only the 7/2 and 9/2 families have a dressed form.
CodeWord make_dressed_codeword(CodeFamily family, const SpinSystem& sys, Field b, double eps1 = 0.0,
                               double eps2 = 0.0);

/// Same as make_dressed_codeword but reuses an already labeled spectrum.
CodeWord make_dressed_codeword(CodeFamily family, const SpinSystem& sys, Field b,
                               const std::vector<DressedState>& states, double eps1, double eps2);

/// An operator acting on one factor of a tensor-product space. A plain dense
/// operator on the whole space has a single factor.
class Operator {
   public:
    Operator() = default;
    Operator(std::string label, ComplexMatrix local);
    Operator(std::string label, ComplexMatrix local, std::vector<std::size_t> dims, std::size_t site);

    const std::string& label() const { return label_; }
    const ComplexMatrix& local() const { return local_; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t site() const { return site_; }
    std::size_t dim() const;

    CVector apply(std::span<const Complex> v) const;
    /// Full matrix on the product space. Intended for small spaces and tests.
    ComplexMatrix dense() const;

   private:
    std::string label_;
    ComplexMatrix local_;
    std::vector<std::size_t> dims_;
    std::size_t site_ = 0;
};

struct ErrorSet {
    std::vector<Operator> operators;

    std::size_t size() const { return operators.size(); }
    std::size_t dim() const { return operators.empty() ? 0 : operators.front().dim(); }
    const Operator& find(std::string_view label) const;
};

enum class ErrorSetKind { FirstOrderB, FirstOrderEB };

/// {1, X, Y, Z} or additionally the six symmetrized products
/// XX, XY, XZ, YY, YZ, ZZ with (J_a J_b + J_b J_a)/2.
ErrorSet standard_error_set(ErrorSetKind kind, Spin j);

/// Embeds every operator on factor `site` of a product space; labels gain
/// `suffix`.
ErrorSet embed_error_set(const ErrorSet& set, const std::vector<std::size_t>& dims, std::size_t site,
                         std::string_view suffix = "");

/// Identity plus each non-identity operator of `kind` on each of `qudits`
/// spin-j factors, labeled "X_A", "XY_C", ...
ErrorSet multiqudit_error_set(ErrorSetKind kind, Spin j, std::size_t qudits = 3);

/// Error set matched to the code-word's space: bare nuclear operators
/// 1_S (x) J for a dressed basis, the plain set for an ideal single spin,
/// the multi-qudit set for the three-qudit code.
ErrorSet error_set_for(const CodeWord& cw, ErrorSetKind kind);

struct KLReport {
    std::vector<std::string> labels;
    /// <0_L|A_i^dagger A_j|1_L>
    ComplexMatrix offdiag_values;
    /// <0_L|A_i^dagger A_j|0_L> - <1_L|A_i^dagger A_j|1_L>
    ComplexMatrix diagdiff_values;
    double max_residual = 0.0;

    double offdiag(std::size_t i, std::size_t j) const { return std::abs(offdiag_values(i, j)); }
    double diagdiff(std::size_t i, std::size_t j) const { return std::abs(diagdiff_values(i, j)); }
    bool satisfied(double tol = 1e-10) const { return max_residual < tol; }
    std::string to_json() const;
};

KLReport kl_residuals(const CodeWord& cw, const ErrorSet& errs);

/// (<0_L|op|0_L>, <1_L|op|1_L>)
std::pair<Complex, Complex> expectation(const CodeWord& cw, const Operator& op);

}  // namespace spinqec
