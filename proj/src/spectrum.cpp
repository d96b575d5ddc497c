#include "whw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "whw/coupling.hpp"
#include "whw/errors.hpp"

namespace whw {

namespace {

// Entire winding function G = det^2 / (4 lambda^4) = e^{2 sqrt(l)} D(l)^2
// with D the scaled determinant. Each zero of det counts twice in G; G is
// analytic across the branch cut and carries one extra simple zero at 0,
// which every valid region excludes.
Complex winding_fn(Complex lambda) {
    const DetResult d = det_m(lambda, DetForm::scaled);
    const Complex root = sqrt_branch(lambda);
    return std::exp(2.0 * root) * d.value * d.value;
}

Complex winding_fn_derivative(Complex lambda) {
    const double h = 1e-6 * std::max(1.0, std::abs(lambda));
    return (winding_fn(lambda + h) - winding_fn(lambda - h)) / (2.0 * h);
}

struct Box {
    double re0, re1, im0, im1;
    double width() const { return std::max(re1 - re0, im1 - im0); }
    Complex center() const { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
    bool contains(Complex z, double slack = 0.0) const {
        return z.real() >= re0 - slack && z.real() <= re1 + slack && z.imag() >= im0 - slack &&
               z.imag() <= im1 + slack;
    }
};

// winding number of G around the box boundary; refines until the result is
// within 0.25 of an even integer and stable under one doubling
int winding_on_box(const Box& b, int points, long* boxes_scanned) {
    if (boxes_scanned) ++(*boxes_scanned);
    const Complex corners[5] = {{b.re0, b.im0}, {b.re1, b.im0}, {b.re1, b.im1},
                                {b.re0, b.im1}, {b.re0, b.im0}};
    const double perimeter = 2.0 * (b.re1 - b.re0) + 2.0 * (b.im1 - b.im0);

    auto evaluate = [&](int n_total) {
        Complex total(0.0);
        double min_abs = 1e300;
        for (int side = 0; side < 4; ++side) {
            const Complex a = corners[side], c = corners[side + 1];
            const double len = std::abs(c - a);
            const int n = std::max(8, static_cast<int>(std::lround(n_total * len / perimeter)));
            const Complex dz = (c - a) / static_cast<double>(n);
            Complex prev = winding_fn_derivative(a) / winding_fn(a);
            min_abs = std::min(min_abs, std::abs(winding_fn(a)));
            for (int i = 1; i <= n; ++i) {
                const Complex z = a + dz * static_cast<double>(i);
                const Complex g = winding_fn(z);
                min_abs = std::min(min_abs, std::abs(g));
                const Complex cur = winding_fn_derivative(z) / g;
                total += 0.5 * (prev + cur) * dz;
                prev = cur;
            }
        }
        const double w = (total / Complex(0.0, 2.0 * std::numbers::pi)).real();
        return std::pair<double, double>(w, min_abs);
    };

    int n = points;
    double prev_w = 1e300;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto [w, min_abs] = evaluate(n);
        if (min_abs < 1e-290 || !std::isfinite(w))
            throw ContourThroughZero("count_zeros: |winding function| vanishes on the contour");
        const double nearest_even = 2.0 * std::lround(w / 2.0);
        if (std::abs(w - nearest_even) <= 0.25 && std::abs(w - prev_w) <= 0.25)
            return static_cast<int>(std::lround(nearest_even));
        prev_w = w;
        n *= 2;
    }
    // a zero hugging the contour also lands here; callers perturb and retry
    throw NonIntegerWinding("count_zeros: winding failed to stabilize on an even integer");
}

double origin_distance(const Box& b) {
    const double dx = std::max({b.re0, 0.0, -b.re1});
    const double dy = std::max({b.im0, 0.0, -b.im1});
    return std::hypot(dx, dy);
}

// modified Newton for the double zeros of G (step -2 G / G')
bool newton_refine(Complex start, double tol, int max_iters, Complex* root, int* iters) {
    Complex z = start;
    for (int k = 0; k < max_iters; ++k) {
        const Complex g = winding_fn(z);
        const Complex gp = winding_fn_derivative(z);
        if (std::abs(gp) == 0.0) return false;
        const Complex step = -2.0 * g / gp;
        z += step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) {
            *root = z;
            *iters = k + 1;
            return true;
        }
    }
    return false;
}

} // namespace

void SearchRegion::validate() const {
    if (!(re_min < re_max) || !(im_min < im_max))
        throw std::invalid_argument("SearchRegion: empty rectangle");
    if (!audit && re_max > 0.0)
        throw std::invalid_argument("SearchRegion: Re > 0 requires audit mode");
    const Box b{re_min, re_max, im_min, im_max};
    if (origin_distance(b) < exclusion_radius_at_origin)
        throw std::invalid_argument("SearchRegion: region must exclude a disk around the origin");
}

SearchRegion SearchRegion::defaults() { return SearchRegion{}; }

namespace {

// winding with perturb-and-retry when a zero sits on (or hugs) the boundary
int winding_with_retry(Box b, int points, long* scanned, double origin_guard) {
    for (int attempt = 0;; ++attempt) {
        try {
            return winding_on_box(b, points, scanned);
        } catch (const std::runtime_error&) {
            if (attempt >= 4) throw;
            const double eps = 2e-3 * b.width() * (attempt + 1);
            const Box grown{b.re0 - eps, b.re1 + eps, b.im0 - eps, b.im1 + eps};
            if (origin_distance(grown) < origin_guard) throw;
            b = grown;
        }
    }
}

} // namespace

int count_zeros(const SearchRegion& region, int contour_points) {
    region.validate();
    Box b{region.re_min, region.re_max, region.im_min, region.im_max};
    long scanned = 0;
    return winding_with_retry(b, contour_points, &scanned,
                              0.5 * region.exclusion_radius_at_origin) / 2;
}

SpectrumReport find_eigenvalues(const SearchRegion& region, double tol) {
    region.validate();
    SpectrumReport report;
    const double min_width = std::max(tol, 1e-12);

    std::vector<Box> stack{Box{region.re_min, region.re_max, region.im_min, region.im_max}};
    std::vector<Complex> roots;
    std::vector<int> root_iters;

    auto box_winding = [&](const Box& b) {
        return winding_with_retry(b, 128, &report.boxes_scanned,
                                  0.5 * region.exclusion_radius_at_origin);
    };

    const int total_winding = box_winding(stack.front());

    while (!stack.empty()) {
        const Box b = stack.back();
        stack.pop_back();
        const int w = box_winding(b);
        if (w == 0) continue;
        if (w == 2) {
            // the zero is inside this box; accept Newton only when it stays
            // here, otherwise keep bisecting toward it
            Complex root;
            int iters = 0;
            if (newton_refine(b.center(), tol, 80, &root, &iters) &&
                b.contains(root, 0.05 * b.width() + 2.0 * tol) &&
                std::abs(det_m(root, DetForm::scaled).value) <= 1e-8) {
                roots.push_back(root);
                root_iters.push_back(iters);
                continue;
            }
            // NewtonDivergence: fall back to bisection down to tol
            if (b.width() <= min_width) {
                roots.push_back(b.center());
                root_iters.push_back(-1);
                continue;
            }
        }
        if (w >= 4 && b.width() <= min_width) {
            report.notes.push_back("multiple-root cluster near (" + std::to_string(b.center().real()) +
                                   ", " + std::to_string(b.center().imag()) + "), winding " +
                                   std::to_string(w / 2));
            for (int i = 0; i < w / 2; ++i) {
                roots.push_back(b.center());
                root_iters.push_back(-1);
            }
            continue;
        }
        // split along the longer side, slightly off-center to dodge zeros on the cut line
        if (b.re1 - b.re0 >= b.im1 - b.im0) {
            const double mid = 0.5 * (b.re0 + b.re1) + 1e-3 * (b.re1 - b.re0);
            stack.push_back(Box{b.re0, mid, b.im0, b.im1});
            stack.push_back(Box{mid, b.re1, b.im0, b.im1});
        } else {
            const double mid = 0.5 * (b.im0 + b.im1) + 1e-3 * (b.im1 - b.im0);
            stack.push_back(Box{b.re0, b.re1, b.im0, mid});
            stack.push_back(Box{b.re0, b.re1, mid, b.im1});
        }
    }

    // deduplicate within 2 tol
    std::vector<Eigenvalue> out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        bool dup = false;
        for (const auto& e : out)
            if (std::abs(e.lambda - roots[i]) <= 2.0 * tol) { dup = true; break; }
        if (dup) continue;
        Eigenvalue e;
        e.lambda = roots[i];
        e.abs_det_residual = std::abs(det_m(roots[i], DetForm::scaled).value);
        e.newton_iters = root_iters[i];
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    report.eigenvalues = std::move(out);
    report.winding_total = total_winding / 2;
    return report;
}

double imaginary_axis_clearance(double s_min, double s_max, int samples, double floor) {
    if (!(s_min > 0.0) || !(s_max > s_min))
        throw std::invalid_argument("imaginary_axis_clearance: need 0 < s_min < s_max");
    double min_abs = 1e300;
    double s_at = s_min;
    const double lr = std::log(s_max / s_min);
    for (int i = 0; i < samples; ++i) {
        const double s = s_min * std::exp(lr * i / std::max(1, samples - 1));
        const double v = std::abs(det_m(Complex(0.0, s), DetForm::scaled).value);
        if (v < min_abs) {
            min_abs = v;
            s_at = s;
        }
    }
    if (min_abs < floor) throw ClearanceViolation(s_at, min_abs);
    return min_abs;
}

} // namespace whw
