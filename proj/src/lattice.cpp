#include "edgelab/lattice.hpp"
#include "edgelab/errors.hpp"

#include <cmath>
#include <string>

namespace edgelab {

SiteIndex::SiteIndex(int j_, Cell c) : j(j_), cell(c) {
    if (j < 1 || j > 6) throw ConfigError("sublattice index must be in 1..6, got " + std::to_string(j));
}

const char* kind_name(InterfaceKind kind) {
    return kind == InterfaceKind::TypeI ? "I" : "II";
}

InterfaceKind parse_kind(const std::string& s) {
    if (s == "I" || s == "TypeI" || s == "type1" || s == "1") return InterfaceKind::TypeI;
    if (s == "II" || s == "TypeII" || s == "type2" || s == "2") return InterfaceKind::TypeII;
    throw ConfigError("unknown interface kind '" + s + "'");
}

Eigen::Vector2d basis_alpha() { return {std::sqrt(3.0) / 2, -0.5}; }
Eigen::Vector2d basis_beta() { return {std::sqrt(3.0) / 2, 0.5}; }

Eigen::Vector2d cell_position(Cell c) {
    return c.p * basis_alpha() + c.q * basis_beta();
}

Eigen::Vector2d site_offset(int j) {
    const Eigen::Vector2d a = basis_alpha(), b = basis_beta();
    const Eigen::Vector2d v1 = -a / 3, v2 = (a - b) / 3, v3 = b / 3;
    switch (j) {
    case 1: return v1;
    case 2: return v2;
    case 3: return v3;
    case 4: return -v3;
    case 5: return -v2;
    case 6: return -v1;
    }
    throw ConfigError("sublattice index must be in 1..6");
}

Eigen::Vector2d site_position(const SiteIndex& s) {
    return site_offset(s.j) + cell_position(s.cell);
}

namespace {
// row order of the neighbourhood table; the third entry carries the cell shift
struct Row {
    int j[3];
    Cell shift;
};
constexpr Row kRows[6] = {
    {{4, 5, 6}, {-1, 0}},
    {{4, 5, 6}, {1, -1}},
    {{4, 5, 6}, {0, 1}},
    {{1, 2, 3}, {0, -1}},
    {{1, 2, 3}, {-1, 1}},
    {{1, 2, 3}, {1, 0}},
};
// which slot of the row is the intercell one
constexpr int kInterSlot[6] = {2, 1, 0, 2, 1, 0};
}

std::array<SiteIndex, 3> neighbors(const SiteIndex& s) {
    const Row& r = kRows[s.j - 1];
    std::array<SiteIndex, 3> out;
    for (int i = 0; i < 3; ++i) {
        Cell c = s.cell;
        if (i == kInterSlot[s.j - 1]) c = c + r.shift;
        out[i] = SiteIndex(r.j[i], c);
    }
    return out;
}

NeighborSplit classify_neighbors(const SiteIndex& s) {
    auto nb = neighbors(s);
    NeighborSplit out;
    int k = 0;
    for (int i = 0; i < 3; ++i) {
        if (nb[i].cell == s.cell)
            out.intracell[k++] = nb[i];
        else
            out.intercell[0] = nb[i];
    }
    return out;
}

InterfaceFrame interface_frame(InterfaceKind kind) {
    if (kind == InterfaceKind::TypeI) return {{1, -1}, {0, 1}};
    return {{1, 1}, {0, 1}};
}

Cell frame_to_cell(InterfaceKind kind, int m, int n) {
    auto f = interface_frame(kind);
    return {m * f.along.p + n * f.across.p, m * f.along.q + n * f.across.q};
}

std::pair<int, int> cell_to_frame(InterfaceKind kind, Cell c) {
    // along = (1, s), across = (0, 1): p = m, q = s*m + n
    int s = kind == InterfaceKind::TypeI ? -1 : 1;
    return {c.p, c.q - s * c.p};
}

int material_sign(InterfaceKind, int, int n) { return n >= 0 ? 1 : -1; }

Cell rotate60(Cell c, int times) {
    times = ((times % 6) + 6) % 6;
    for (int i = 0; i < times; ++i) c = Cell{-c.q, c.p + c.q};
    return c;
}

}
