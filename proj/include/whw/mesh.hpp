#pragma once

#include <stdexcept>

namespace whw {

enum class SystemKind {
    full_A, // wave (0,1) + heat (1,2) + wave (2,3)
    half_B, // wave (0,1) + heat (1,3/2), w(3/2) = 0
};

// Three joined uniform grids sharing the interface nodes. The half system
// keeps the same spacing, so its heat grid ends at the seam node 3/2 and
// n_per_unit must be even.
struct Mesh {
    SystemKind system = SystemKind::full_A;
    int n_per_unit = 64;

    int n() const { return n_per_unit; }
    int heat_nodes() const { return system == SystemKind::full_A ? n_per_unit : n_per_unit / 2; }
    double spacing() const { return 1.0 / n_per_unit; }

    void validate() const {
        if (n_per_unit < 8) throw std::invalid_argument("Mesh: n_per_unit must be >= 8");
        if (system == SystemKind::half_B && n_per_unit % 2 != 0)
            throw std::invalid_argument("Mesh: half system needs even n_per_unit");
    }
};

// Index map for the position-interleaved state vector. Full system:
//   [u_1 v_1] ... [u_{n-1} v_{n-1}] [u_n th1] w_1 ... w_{n-1} [th2 ut_0]
//   [ut_1 vt_1] ... [ut_{n-1} vt_{n-1}]
// which keeps the generator's bandwidth at 3. Eliminated by construction:
// u_0 = v_0 = 0, ut_n = vt_n = 0, and for the half system w_m = 0.
struct Layout {
    SystemKind system;
    int n; // n_per_unit
    int m; // heat interior count: n (full) or n/2 (half)

    explicit Layout(const Mesh& mesh)
        : system(mesh.system), n(mesh.n_per_unit), m(mesh.heat_nodes()) {}

    int size() const {
        return system == SystemKind::full_A ? 5 * n - 1 : 2 * n + m - 1;
    }
    int iu(int j) const { return j < n ? 2 * (j - 1) : 2 * n - 2; } // j = 1..n
    int iv(int j) const { return 2 * (j - 1) + 1; }                 // j = 1..n-1
    int ith1() const { return 2 * n - 1; }
    int iw(int j) const { return 2 * n - 1 + j; }                   // j = 1..m-1
    int ith2() const { return 3 * n - 1; }                          // full only
    int iut(int j) const { return j == 0 ? 3 * n : 3 * n + 2 * j - 1; } // j = 0..n-1, full only
    int ivt(int j) const { return 3 * n + 2 * j; }                  // j = 1..n-1, full only
};

} // namespace whw
