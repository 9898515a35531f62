#include "edgelab/hamiltonian.hpp"
#include "edgelab/errors.hpp"

#include <cmath>
#include <string>

namespace edgelab {

void HoppingProfile::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("hopping profile: ") + what);
    };
    need(std::isfinite(b_plus) && std::isfinite(b_minus) && std::isfinite(delta_plus) &&
             std::isfinite(delta_minus) && std::isfinite(c),
         "non-finite value");
    need(b_plus > 0, "b_plus must be > 0");
    need(b_minus > 0, "b_minus must be > 0");
    need(c > 0, "c must be > 0");
    need(b_plus + delta_plus > 0, "b_plus + delta_plus must be > 0");
    need(b_minus + delta_minus > 0, "b_minus + delta_minus must be > 0");
}

HoppingProfile HoppingProfile::with_c(double c_new) const {
    HoppingProfile p = *this;
    p.c = c_new;
    return p;
}

CoefficientRow coeffs_type1(const HoppingProfile& p, int n) {
    auto a = [&](int m) {
        if (m >= 1) return p.b_plus + p.delta_plus;
        if (m == 0) return p.c;
        return p.b_minus + p.delta_minus;
    };
    CoefficientRow r;
    r.a = a(n);
    r.b = n >= 0 ? p.b_plus : p.b_minus;
    r.c = a(n + 1);
    r.d = n >= 0 ? p.b_plus + p.delta_plus : p.b_minus + p.delta_minus;
    return r;
}

CoefficientRow coeffs_type2(const HoppingProfile& p, int n) {
    CoefficientRow r;
    if (n >= 0)
        r.a = p.b_plus + p.delta_plus;
    else if (n == -1)
        r.a = p.c;
    else
        r.a = p.b_minus + p.delta_minus;
    r.b = n >= 0 ? p.b_plus : p.b_minus;
    r.c = r.a;
    if (n >= 0)
        r.d = p.b_plus + p.delta_plus;
    else if (n >= -2)
        r.d = p.c;
    else
        r.d = p.b_minus + p.delta_minus;
    return r;
}

CoefficientRow coefficients(InterfaceKind kind, const HoppingProfile& p, int n) {
    return kind == InterfaceKind::TypeI ? coeffs_type1(p, n) : coeffs_type2(p, n);
}

std::vector<ChainTerm> chain_terms(InterfaceKind kind, const HoppingProfile& p, int N) {
    std::vector<ChainTerm> t;
    t.reserve(18 * (2 * N + 1));
    auto add = [&](int j, int n, int jj, int nn, double w, int ph) {
        if (nn < -N || nn > N) return;
        t.push_back({j, n, jj, nn, w, ph});
    };
    for (int n = -N; n <= N; ++n) {
        const CoefficientRow r = coefficients(kind, p, n);
        const CoefficientRow rm1 = coefficients(kind, p, n - 1);
        const double b = r.b;
        if (kind == InterfaceKind::TypeI) {
            add(1, n, 4, n, b, 0), add(1, n, 5, n, b, 0), add(1, n, 6, n - 1, rm1.c, -1);
            add(2, n, 4, n, b, 0), add(2, n, 5, n, r.d, 1), add(2, n, 6, n, b, 0);
            add(3, n, 4, n + 1, r.c, 0), add(3, n, 5, n, b, 0), add(3, n, 6, n, b, 0);
            add(4, n, 1, n, b, 0), add(4, n, 2, n, b, 0), add(4, n, 3, n - 1, rm1.c, 0);
            add(5, n, 1, n, b, 0), add(5, n, 2, n, r.d, -1), add(5, n, 3, n, b, 0);
            add(6, n, 1, n + 1, r.c, 1), add(6, n, 2, n, b, 0), add(6, n, 3, n, b, 0);
        } else {
            const CoefficientRow rm2 = coefficients(kind, p, n - 2);
            add(1, n, 4, n, b, 0), add(1, n, 5, n, b, 0), add(1, n, 6, n + 1, r.c, -1);
            add(2, n, 4, n, b, 0), add(2, n, 5, n - 2, rm2.d, 1), add(2, n, 6, n, b, 0);
            add(3, n, 4, n + 1, r.c, 0), add(3, n, 5, n, b, 0), add(3, n, 6, n, b, 0);
            add(4, n, 1, n, b, 0), add(4, n, 2, n, b, 0), add(4, n, 3, n - 1, rm1.c, 0);
            add(5, n, 1, n, b, 0), add(5, n, 2, n + 2, r.d, -1), add(5, n, 3, n, b, 0);
            add(6, n, 1, n - 1, rm1.c, 1), add(6, n, 2, n, b, 0), add(6, n, 3, n, b, 0);
        }
    }
    return t;
}

namespace {

int min_width(InterfaceKind kind) { return kind == InterfaceKind::TypeI ? 2 : 4; }

void check_width(InterfaceKind kind, int N) {
    if (N < min_width(kind))
        throw ConfigError("half width N=" + std::to_string(N) + " too small for type " +
                          kind_name(kind) + " (need >= " + std::to_string(min_width(kind)) + ")");
}

}

BlochOperator bloch_operator(InterfaceKind kind, const HoppingProfile& prof, double k, int N) {
    prof.validate();
    check_width(kind, N);
    BlochOperator op{kind, prof, k, N, Eigen::MatrixXcd::Zero(chain_dim(N), chain_dim(N))};
    const cd e = std::polar(1.0, k);
    for (const auto& t : chain_terms(kind, prof, N)) {
        cd phase = t.phase == 0 ? cd(1) : (t.phase > 0 ? e : std::conj(e));
        op.matrix(chain_index(t.row_j, t.row_n, N), chain_index(t.col_j, t.col_n, N)) += -t.weight * phase;
    }
    return op;
}

BlochOperator bloch_h1(const HoppingProfile& prof, double k, int N) {
    return bloch_operator(InterfaceKind::TypeI, prof, k, N);
}

BlochOperator bloch_h2(const HoppingProfile& prof, double k, int N) {
    return bloch_operator(InterfaceKind::TypeII, prof, k, N);
}

Eigen::MatrixXcd first_order(InterfaceKind kind, const HoppingProfile& prof, int N) {
    prof.validate();
    check_width(kind, N);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(chain_dim(N), chain_dim(N));
    for (const auto& t : chain_terms(kind, prof, N)) {
        if (t.phase == 0) continue;
        m(chain_index(t.row_j, t.row_n, N), chain_index(t.col_j, t.col_n, N)) += cd(0, -t.weight * t.phase);
    }
    return m;
}

Eigen::MatrixXcd h1_first_order(const HoppingProfile& prof, int N) {
    return first_order(InterfaceKind::TypeI, prof, N);
}

Eigen::MatrixXcd h2_first_order(const HoppingProfile& prof, int N) {
    return first_order(InterfaceKind::TypeII, prof, N);
}

Eigen::MatrixXcd t_unitary(double k, int N) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(chain_dim(N), chain_dim(N));
    for (int n = -N; n <= N; ++n) {
        const cd ph = std::polar(1.0, -n * k);
        for (int j = 1; j <= 3; ++j) {
            u(chain_index(j, n, N), chain_index(j + 3, n, N)) = ph;
            u(chain_index(j + 3, n, N), chain_index(j, n, N)) = ph;
        }
    }
    return u;
}

Eigen::MatrixXcd r_unitary(double k, int N) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(chain_dim(N), chain_dim(N));
    static constexpr int flip[6] = {3, 2, 1, 6, 5, 4};
    for (int n = -N; n <= N; ++n) {
        const cd ph = std::polar(1.0, n * k);
        for (int j = 1; j <= 6; ++j) u(chain_index(j, n, N), chain_index(flip[j - 1], n, N)) = ph;
    }
    return u;
}

Eigen::MatrixXcd v_matrix(int N) {
    Eigen::VectorXcd d(chain_dim(N));
    for (int i = 0; i < d.size(); ++i) d[i] = (i % 6) < 3 ? 1.0 : -1.0;
    return d.asDiagonal();
}

Eigen::VectorXcd apply_T(double k, int N, const Eigen::VectorXcd& x) {
    if (x.size() != chain_dim(N)) throw ConfigError("state dimension does not match chain");
    return t_unitary(k, N) * x.conjugate();
}

Eigen::VectorXcd apply_V(int N, const Eigen::VectorXcd& x) {
    if (x.size() != chain_dim(N)) throw ConfigError("state dimension does not match chain");
    return v_matrix(N) * x;
}

Eigen::VectorXcd apply_R(double k, int N, const Eigen::VectorXcd& x) {
    if (x.size() != chain_dim(N)) throw ConfigError("state dimension does not match chain");
    return r_unitary(k, N) * x.conjugate();
}

}
