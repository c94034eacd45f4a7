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

#include "spinqec/codeword.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"
#include "spinqec/error.hpp"

namespace spinqec {

namespace {

struct FamilyInfo {
    CodeFamily family;
    const char* name;
};

constexpr FamilyInfo kFamilies[] = {
    {CodeFamily::Ideal72, "ideal-7/2"},   {CodeFamily::Distorted72, "distorted-7/2"},
    {CodeFamily::Ideal92, "ideal-9/2"},   {CodeFamily::Tailored92, "tailored-9/2"},
    {CodeFamily::Spin232, "spin-23/2"},   {CodeFamily::ThreeQudit, "three-qudit"},
};

bool is_72(CodeFamily f) { return f == CodeFamily::Ideal72 || f == CodeFamily::Distorted72; }
bool is_92(CodeFamily f) { return f == CodeFamily::Ideal92 || f == CodeFamily::Tailored92; }

// Support of a two-parameter family: (label, amplitude) pairs for each word.
struct Support {
    std::vector<std::pair<double, double>> zero;
    std::vector<std::pair<double, double>> one;
};

Support family_support(CodeFamily family, double eps1, double eps2) {
    const double t0 = family_theta0(family);
    const double c1 = std::cos(t0 + eps1), s1 = std::sin(t0 + eps1);
    const double c2 = std::cos(t0 + eps2), s2 = std::sin(t0 + eps2);
    if (is_72(family)) return {{{-3.5, c1}, {1.5, s1}}, {{3.5, -c2}, {-1.5, s2}}};
    if (is_92(family)) return {{{-4.5, c1}, {1.5, s1}}, {{4.5, c2}, {-1.5, s2}}};
    if (family == CodeFamily::Spin232) {
        const double a = std::sqrt(125.0 / 1482.0), b = std::sqrt(874.0 / 1482.0), c = std::sqrt(483.0 / 1482.0);
        return {{{-11.5, a}, {-2.5, b}, {7.5, c}}, {{11.5, -a}, {2.5, b}, {-7.5, c}}};
    }
    throw PreconditionError("family has no single-spin support");
}

void check_eps(CodeFamily family, double eps1, double eps2) {
    if (!std::isfinite(eps1) || !std::isfinite(eps2)) throw PreconditionError("distortion angles must be finite");
    const bool fixed = family == CodeFamily::Ideal72 || family == CodeFamily::Ideal92 ||
                       family == CodeFamily::Spin232 || family == CodeFamily::ThreeQudit;
    if (fixed && (eps1 != 0.0 || eps2 != 0.0)) {
        throw PreconditionError(std::string(family_name(family)) + " takes no distortion angles");
    }
}

}  // namespace

std::string_view family_name(CodeFamily f) {
    for (const auto& info : kFamilies)
        if (info.family == f) return info.name;
    return "unknown";
}

CodeFamily parse_family(std::string_view name) {
    for (const auto& info : kFamilies)
        if (name == info.name) return info.family;
    throw PreconditionError("unknown code family '" + std::string(name) + "'");
}

Spin family_spin(CodeFamily f) {
    if (is_72(f) || f == CodeFamily::ThreeQudit) return Spin{7};
    if (is_92(f)) return Spin{9};
    return Spin{23};
}

double family_theta0(CodeFamily f) {
    if (is_72(f)) return std::acos(std::sqrt(0.3));
    if (is_92(f)) return std::numbers::pi / 3.0;
    return 0.0;
}

CodeWord make_codeword(CodeFamily family, double eps1, double eps2) {
    check_eps(family, eps1, eps2);
    CodeWord cw;
    cw.family = family;
    cw.basis = BasisKind::IdealProduct;
    cw.theta0 = family_theta0(family);
    cw.eps1 = eps1;
    cw.eps2 = eps2;
    const Spin j = family_spin(family);
    if (family == CodeFamily::ThreeQudit) {
        const std::size_t d = j.dim();
        cw.zero_l.assign(d * d * d, 0.0);
        cw.one_l.assign(d * d * d, 0.0);
        auto put = [&](CVector& v, double m, double amp) {
            const std::size_t k = j.index_of(m);
            v[(k * d + k) * d + k] = amp;
        };
        const double a = std::sqrt(2.0 / 16.0), b = std::sqrt(7.0 / 16.0);
        put(cw.zero_l, -3.5, a);
        put(cw.zero_l, -1.5, b);
        put(cw.zero_l, 2.5, b);
        put(cw.one_l, 3.5, a);
        put(cw.one_l, 1.5, b);
        put(cw.one_l, -2.5, -b);
        return cw;
    }
    const Support sup = family_support(family, eps1, eps2);
    cw.zero_l.assign(j.dim(), 0.0);
    cw.one_l.assign(j.dim(), 0.0);
    for (auto [m, a] : sup.zero) cw.zero_l[j.index_of(m)] = a;
    for (auto [m, a] : sup.one) cw.one_l[j.index_of(m)] = a;
    return cw;
}

CodeWord make_dressed_codeword(CodeFamily family, const SpinSystem& sys, Field b, double eps1, double eps2) {
    if (!is_72(family) && !is_92(family)) {
        throw PreconditionError(std::string(family_name(family)) + " has no dressed-basis form");
    }
    return make_dressed_codeword(family, sys, b, dressed_eigenstates(sys, b), eps1, eps2);
}

CodeWord make_dressed_codeword(CodeFamily family, const SpinSystem& sys, Field b,
                               const std::vector<DressedState>& states, double eps1, double eps2) {
    if (!is_72(family) && !is_92(family)) {
        throw PreconditionError(std::string(family_name(family)) + " has no dressed-basis form");
    }
    check_eps(family, eps1, eps2);
    if (!(sys.nucleus == family_spin(family))) {
        throw PreconditionError(std::string(family_name(family)) + " needs nuclear spin " +
                                std::to_string(family_spin(family).value()) + ", system '" + sys.name + "' has " +
                                std::to_string(sys.nucleus.value()));
    }
    CodeWord cw;
    cw.family = family;
    cw.basis = BasisKind::Dressed;
    cw.system = sys;
    cw.field = b;
    cw.theta0 = family_theta0(family);
    cw.eps1 = eps1;
    cw.eps2 = eps2;
    cw.zero_l.assign(sys.dim(), 0.0);
    cw.one_l.assign(sys.dim(), 0.0);
    const Support sup = family_support(family, eps1, eps2);
    auto add = [&](CVector& v, double m_i, double amp) {
        const CVector& s = find_state(states, {-0.5, m_i}).vector;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += amp * s[k];
    };
    for (auto [m, a] : sup.zero) add(cw.zero_l, m, a);
    for (auto [m, a] : sup.one) add(cw.one_l, m, a);
    return cw;
}

Operator::Operator(std::string label, ComplexMatrix local)
    : Operator(std::move(label), std::move(local), {}, 0) {}

Operator::Operator(std::string label, ComplexMatrix local, std::vector<std::size_t> dims, std::size_t site)
    : label_(std::move(label)), local_(std::move(local)), dims_(std::move(dims)), site_(site) {
    if (!local_.is_square()) throw PreconditionError("operator '" + label_ + "' is not square");
    if (dims_.empty()) {
        dims_ = {local_.rows()};
        site_ = 0;
    }
    if (site_ >= dims_.size() || dims_[site_] != local_.rows()) {
        throw PreconditionError("operator '" + label_ + "' does not fit factor " + std::to_string(site_));
    }
}

std::size_t Operator::dim() const {
    std::size_t d = 1;
    for (auto k : dims_) d *= k;
    return d;
}

CVector Operator::apply(std::span<const Complex> v) const {
    const std::size_t n = dim();
    if (v.size() != n) {
        throw PreconditionError("operator '" + label_ + "' acts on dimension " + std::to_string(n) + ", got " +
                                std::to_string(v.size()));
    }
    std::size_t inner = 1;
    for (std::size_t k = site_ + 1; k < dims_.size(); ++k) inner *= dims_[k];
    const std::size_t d = dims_[site_];
    const std::size_t outer = n / (inner * d);
    CVector out(n, Complex{0.0, 0.0});
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const Complex m = local_(r, c);
                if (m == Complex{0.0, 0.0}) continue;
                const std::size_t dst = (o * d + r) * inner;
                const std::size_t src = (o * d + c) * inner;
                for (std::size_t i = 0; i < inner; ++i) out[dst + i] += m * v[src + i];
            }
    return out;
}

ComplexMatrix Operator::dense() const {
    ComplexMatrix m = ComplexMatrix::identity(1);
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        m = kron(m, k == site_ ? local_ : ComplexMatrix::identity(dims_[k]));
    }
    return m;
}

const Operator& ErrorSet::find(std::string_view label) const {
    for (const auto& op : operators)
        if (op.label() == label) return op;
    throw PreconditionError("error set has no operator '" + std::string(label) + "'");
}

ErrorSet standard_error_set(ErrorSetKind kind, Spin j) {
    const SpinOperators s = spin_operators(j);
    ErrorSet set;
    set.operators.emplace_back("1", ComplexMatrix::identity(j.dim()));
    set.operators.emplace_back("X", s.x);
    set.operators.emplace_back("Y", s.y);
    set.operators.emplace_back("Z", s.z);
    if (kind == ErrorSetKind::FirstOrderEB) {
        const ComplexMatrix* axes[] = {&s.x, &s.y, &s.z};
        const char* names[] = {"X", "Y", "Z"};
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                ComplexMatrix sym = (*axes[a] * *axes[b] + *axes[b] * *axes[a]) * Complex{0.5, 0.0};
                set.operators.emplace_back(std::string(names[a]) + names[b], std::move(sym));
            }
    }
    return set;
}

ErrorSet embed_error_set(const ErrorSet& set, const std::vector<std::size_t>& dims, std::size_t site,
                         std::string_view suffix) {
    ErrorSet out;
    for (const auto& op : set.operators) {
        if (op.dims().size() != 1) throw PreconditionError("embed_error_set: operator is already embedded");
        out.operators.emplace_back(op.label() + std::string(suffix), op.local(), dims, site);
    }
    return out;
}

ErrorSet multiqudit_error_set(ErrorSetKind kind, Spin j, std::size_t qudits) {
    if (qudits == 0 || qudits > 26) throw PreconditionError("multiqudit_error_set: bad qudit count");
    const ErrorSet single = standard_error_set(kind, j);
    const std::vector<std::size_t> dims(qudits, j.dim());
    ErrorSet out;
    out.operators.emplace_back("1", ComplexMatrix::identity(j.dim()), dims, 0);
    for (std::size_t q = 0; q < qudits; ++q) {
        const std::string suffix = std::string("_") + static_cast<char>('A' + q);
        for (const auto& op : single.operators) {
            if (op.label() == "1") continue;
            out.operators.emplace_back(op.label() + suffix, op.local(), dims, q);
        }
    }
    return out;
}

ErrorSet error_set_for(const CodeWord& cw, ErrorSetKind kind) {
    const Spin j = family_spin(cw.family);
    if (cw.family == CodeFamily::ThreeQudit) return multiqudit_error_set(kind, j, 3);
    if (cw.basis == BasisKind::Dressed) {
        const SpinSystem& sys = *cw.system;
        return embed_error_set(standard_error_set(kind, sys.nucleus), {sys.electron.dim(), sys.nucleus.dim()}, 1);
    }
    return standard_error_set(kind, j);
}

KLReport kl_residuals(const CodeWord& cw, const ErrorSet& errs) {
    const std::size_t n = errs.size();
    if (n == 0) throw PreconditionError("kl_residuals: empty error set");
    for (const auto& op : errs.operators) {
        if (op.dim() != cw.dim()) {
            throw PreconditionError("kl_residuals: operator '" + op.label() + "' has dimension " +
                                    std::to_string(op.dim()) + ", code space has " + std::to_string(cw.dim()));
        }
    }
    std::vector<CVector> a0(n), a1(n);
    for (std::size_t i = 0; i < n; ++i) {
        a0[i] = errs.operators[i].apply(cw.zero_l);
        a1[i] = errs.operators[i].apply(cw.one_l);
    }
    KLReport r;
    r.offdiag_values = ComplexMatrix(n, n);
    r.diagdiff_values = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        r.labels.push_back(errs.operators[i].label());
        for (std::size_t j = 0; j < n; ++j) {
            r.offdiag_values(i, j) = inner(a0[i], a1[j]);
            r.diagdiff_values(i, j) = inner(a0[i], a0[j]) - inner(a1[i], a1[j]);
            r.max_residual = std::max({r.max_residual, r.offdiag(i, j), r.diagdiff(i, j)});
        }
    }
    return r;
}

std::pair<Complex, Complex> expectation(const CodeWord& cw, const Operator& op) {
    if (op.dim() != cw.dim()) throw PreconditionError("expectation: dimension mismatch");
    return {inner(cw.zero_l, op.apply(cw.zero_l)), inner(cw.one_l, op.apply(cw.one_l))};
}

std::string KLReport::to_json() const {
    nlohmann::json j;
    j["labels"] = labels;
    const std::size_t n = labels.size();
    auto table = [&](auto&& get) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < n; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < n; ++k) row.push_back(get(i, k));
            rows.push_back(row);
        }
        return rows;
    };
    j["offdiag"] = table([&](std::size_t i, std::size_t k) { return offdiag(i, k); });
    j["diagdiff"] = table([&](std::size_t i, std::size_t k) { return diagdiff(i, k); });
    j["max_residual"] = max_residual;
    return j.dump();
}

}  // namespace spinqec
