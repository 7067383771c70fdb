#include <doctest.h>

#include <set>

#include "cubeknot/lattice.hpp"

using namespace cubeknot;

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

} // namespace

TEST_CASE("cell_support: unit cube, translated square, subdivided cube") {
    const Box cube = cell_support(make_cell({0, 0, 0}, {0, 1, 2}), Scale{1});
    for (int i = 0; i < 3; ++i) {
        CHECK(cube.lo[i] == 0.0);
        CHECK(cube.hi[i] == 1.0);
    }

    const Box square = cell_support(make_cell({2, -1, 0}, {0, 1}), Scale{1});
    CHECK(square.lo[0] == 2.0);
    CHECK(square.hi[0] == 3.0);
    CHECK(square.lo[1] == -1.0);
    CHECK(square.hi[1] == 0.0);
    CHECK(square.lo[2] == 0.0);
    CHECK(square.hi[2] == 0.0);

    const Box fine = cell_support(make_cell({0, 0, 0}, {0, 1, 2}), Scale{4});
    for (int i = 0; i < 3; ++i) {
        CHECK(fine.lo[i] == 0.0);
        CHECK(fine.hi[i] == doctest::Approx(0.25));
    }
}

TEST_CASE("faces_of: cube combinatorics") {
    const CellKey cube = make_cell({0, 0, 0}, {0, 1, 2});
    CHECK(faces_of(cube, 2).size() == 6);
    CHECK(faces_of(cube, 1).size() == 12);
    CHECK(faces_of(cube, 0).size() == 8);
    CHECK(faces_of(make_cell({0, 0, 0}, {0, 1}), 0).size() == 4);
    CHECK(faces_of(cube, 3) == std::vector<CellKey>{cube});
    CHECK_THROWS_AS(faces_of(cube, 4), InputError);
    CHECK_THROWS_AS(faces_of(cube, -1), InputError);
}

TEST_CASE("cofaces_of: spec examples") {
    // Square z=0 anchored at origin: its two cubes.
    const CellKey square = make_cell({0, 0, 0}, {0, 1});
    const auto cubes = cofaces_of(square, 3, 3);
    REQUIRE(cubes.size() == 2);
    CHECK(cubes[0] == make_cell({0, 0, -1}, {0, 1, 2}));
    CHECK(cubes[1] == make_cell({0, 0, 0}, {0, 1, 2}));

    const CellKey edge_x = make_cell({0, 0, 0}, {0});
    CHECK(cofaces_of(edge_x, 2, 3).size() == 4);

    const CellKey vertex = make_cell({0, 0, 0}, {});
    CHECK(cofaces_of(vertex, 1, 3).size() == 6);

    CHECK_THROWS_AS(cofaces_of(square, 1, 3), InputError);
    CHECK_THROWS_AS(cofaces_of(square, 4, 3), InputError);
}

TEST_CASE("face and coface counts match the binomial formulas") {
    for (int d = 1; d <= kMaxDim; ++d) {
        std::uint8_t all = static_cast<std::uint8_t>((1u << d) - 1);
        CellKey cell;
        cell.anchor = {3, -2, 5, 1};
        for (int i = d; i < kMaxDim; ++i) cell.anchor[i] = 0;
        cell.axes = all;
        for (int k = 0; k <= d; ++k)
            CHECK(static_cast<long>(faces_of(cell, k).size()) == binom(d, k) * (1L << (d - k)));
        CellKey vertex;
        vertex.anchor = cell.anchor;
        for (int k = 0; k <= d; ++k)
            CHECK(static_cast<long>(cofaces_of(vertex, k, d).size()) == binom(d, k) * (1L << k));
    }
}

TEST_CASE("faces_of and cofaces_of are mutually consistent on a window") {
    // Every k-cell of a small 3D window, bottom-up.
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                for (std::uint8_t axes = 0; axes < 8; ++axes) {
                    CellKey c;
                    c.anchor = {x, y, z, 0};
                    c.axes = axes;
                    for (int k = c.dim(); k <= 3; ++k) {
                        for (const CellKey& up : cofaces_of(c, k, 3)) {
                            const auto down = faces_of(up, c.dim());
                            CHECK(std::count(down.begin(), down.end(), c) == 1);
                        }
                    }
                    for (int k = 0; k <= c.dim(); ++k) {
                        for (const CellKey& down : faces_of(c, k)) {
                            const auto up = cofaces_of(down, c.dim(), 3);
                            CHECK(std::count(up.begin(), up.end(), c) == 1);
                        }
                    }
                }
}

TEST_CASE("every codimension-1 cell has exactly two top cofaces") {
    for (int d = 2; d <= kMaxDim; ++d) {
        for (int x = -1; x <= 1; ++x)
            for (int y = -1; y <= 1; ++y) {
                for (int drop = 0; drop < d; ++drop) {
                    CellKey c;
                    c.anchor = {x, y, 0, 0};
                    c.axes = static_cast<std::uint8_t>(((1u << d) - 1) & ~(1u << drop));
                    CHECK(cofaces_of(c, d, d).size() == 2);
                }
            }
    }
}

TEST_CASE("supports of faces are contained in the cell support") {
    const CellKey cube = make_cell({2, -3, 1}, {0, 1, 2});
    const Box outer = cell_support(cube, Scale{4});
    for (int k = 0; k <= 3; ++k) {
        for (const CellKey& f : faces_of(cube, k)) {
            const Box inner = cell_support(f, Scale{4});
            for (int i = 0; i < 3; ++i) {
                CHECK(inner.lo[i] >= outer.lo[i] - 1e-15);
                CHECK(inner.hi[i] <= outer.hi[i] + 1e-15);
            }
        }
    }
}

TEST_CASE("canonical equality and ordering") {
    const CellKey a = make_cell({0, 0, 0}, {0, 1});
    const CellKey b = make_cell({0, 0, 0}, {1, 0});
    CHECK(a == b);  // axes are a set
    CHECK(CellKeyHash{}(a) == CellKeyHash{}(b));

    std::set<CellKey> cells{a, b, make_cell({0, 0, 1}, {0, 1})};
    CHECK(cells.size() == 2);
}
