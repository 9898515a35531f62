#pragma once
#include <array>
#include <utility>
#include <Eigen/Dense>

namespace edgelab {

// lattice translation p*va + q*vb
struct Cell {
    int p = 0;
    int q = 0;
    Cell operator+(const Cell& o) const { return {p + o.p, q + o.q}; }
    Cell operator-(const Cell& o) const { return {p - o.p, q - o.q}; }
    bool operator==(const Cell&) const = default;
};

struct SiteIndex {
    int j = 1;  // 1..6
    Cell cell;
    SiteIndex() = default;
    SiteIndex(int j_, Cell c);
    bool operator==(const SiteIndex&) const = default;
};

enum class InterfaceKind { TypeI, TypeII };

const char* kind_name(InterfaceKind kind);
InterfaceKind parse_kind(const std::string& s);

Eigen::Vector2d basis_alpha();
Eigen::Vector2d basis_beta();
Eigen::Vector2d cell_position(Cell c);
Eigen::Vector2d site_offset(int j);
Eigen::Vector2d site_position(const SiteIndex& s);

std::array<SiteIndex, 3> neighbors(const SiteIndex& s);

struct NeighborSplit {
    std::array<SiteIndex, 2> intracell;
    std::array<SiteIndex, 1> intercell;
};
NeighborSplit classify_neighbors(const SiteIndex& s);

// periodic direction and extension direction, in (va, vb) coordinates
struct InterfaceFrame {
    Cell along;
    Cell across;
};
InterfaceFrame interface_frame(InterfaceKind kind);

Cell frame_to_cell(InterfaceKind kind, int m, int n);
std::pair<int, int> cell_to_frame(InterfaceKind kind, Cell c);

int material_sign(InterfaceKind kind, int m, int n);

// rotation by 60 degrees (counter-clockwise) applied `times` times; maps the lattice to itself
Cell rotate60(Cell c, int times);

}
