#include "edgematch/spectral_edges.hpp"

#include "edgematch/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

namespace edgematch {

namespace {

constexpr double kDegenerateGrad = 1e-9;

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer alloc_complex(std::size_t n) {
    auto* p = fftw_alloc_complex(n);
    if (p == nullptr) throw std::bad_alloc();
    return ComplexBuffer(p);
}

class Plan {
public:
    Plan(int w, int h, fftw_complex* buf, int sign) {
        std::lock_guard lock(planner_mutex());
        // FFTW_ESTIMATE on fftw_malloc'd buffers picks the same algorithm on
        // every run, which keeps results bit-reproducible.
        plan_ = fftw_plan_dft_2d(h, w, buf, buf, sign, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

// Angular frequency of DFT index k on an n-point grid, k mapped to [-n/2, n/2).
double angular_freq(int k, int n) {
    const int kk = k < (n + 1) / 2 ? k : k - n;
    return 2.0 * std::numbers::pi * kk / n;
}

bool is_nyquist(int k, int n) { return n % 2 == 0 && k == n / 2; }

double bilinear_periodic(const std::vector<double>& a, int w, int h, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const double ax = x - fx;
    const double ay = y - fy;
    const auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
    const int x0 = wrap(static_cast<int>(fx), w);
    const int y0 = wrap(static_cast<int>(fy), h);
    const int x1 = wrap(x0 + 1, w);
    const int y1 = wrap(y0 + 1, h);
    const auto at = [&](int xx, int yy) { return a[static_cast<std::size_t>(yy) * w + xx]; };
    return (1 - ay) * ((1 - ax) * at(x0, y0) + ax * at(x1, y0)) +
           ay * ((1 - ax) * at(x0, y1) + ax * at(x1, y1));
}

} // namespace

int EdgeExtractionConfig::effective_border_margin() const {
    return border_margin ? *border_margin : static_cast<int>(std::ceil(4.0 * sigma));
}

void EdgeExtractionConfig::validate() const {
    if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "sigma must be > 0");
    if (!(mag_threshold_rel > 0.0 && mag_threshold_rel < 1.0)) {
        throw Error(Errc::InvalidArgument, "mag_threshold_rel must be in (0,1)");
    }
    if (!(curvature_max > 0.0)) throw Error(Errc::InvalidArgument, "curvature_max must be > 0");
    if (border_margin && *border_margin < 0) throw Error(Errc::InvalidArgument, "border_margin must be >= 0");
}

GradientField spectral_gradient(const GrayImage& img, double sigma) {
    if (img.width < 4 || img.height < 4) {
        throw Error(Errc::ImageTooSmall, "spectral_gradient needs an image of at least 4x4");
    }
    if (!(sigma >= 0.0)) throw Error(Errc::InvalidArgument, "sigma must be >= 0");
    img.validate();

    const int w = img.width;
    const int h = img.height;
    const std::size_t n = img.size();

    auto spectrum = alloc_complex(n);
    auto work = alloc_complex(n);
    const Plan forward(w, h, spectrum.get(), FFTW_FORWARD);
    const Plan inverse(w, h, work.get(), FFTW_BACKWARD);

    double signal_norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        spectrum[i][0] = img.pixels[i];
        spectrum[i][1] = 0.0;
        signal_norm2 += img.pixels[i] * img.pixels[i];
    }
    forward.execute();

    // Smoothing folded into the spectrum once, normalization included.
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> u(static_cast<std::size_t>(w)), v(static_cast<std::size_t>(h));
    std::vector<double> ud(u.size()), vd(v.size()); // differentiation frequencies, Nyquist zeroed
    for (int k = 0; k < w; ++k) {
        u[k] = angular_freq(k, w);
        ud[k] = is_nyquist(k, w) ? 0.0 : u[k];
    }
    for (int k = 0; k < h; ++k) {
        v[k] = angular_freq(k, h);
        vd[k] = is_nyquist(k, h) ? 0.0 : v[k];
    }
    for (int ky = 0; ky < h; ++ky) {
        for (int kx = 0; kx < w; ++kx) {
            const double g = std::exp(-0.5 * sigma * sigma * (u[kx] * u[kx] + v[ky] * v[ky])) * inv_n;
            const std::size_t i = static_cast<std::size_t>(ky) * w + kx;
            spectrum[i][0] *= g;
            spectrum[i][1] *= g;
        }
    }

    GradientField field;
    field.width = w;
    field.height = h;
    field.sigma = sigma;
    double max_imag = 0.0;

    // multiplier(kx, ky) is a complex factor applied to the smoothed spectrum.
    const auto derive = [&](auto multiplier) {
        for (int ky = 0; ky < h; ++ky) {
            for (int kx = 0; kx < w; ++kx) {
                const std::size_t i = static_cast<std::size_t>(ky) * w + kx;
                const std::complex<double> s(spectrum[i][0], spectrum[i][1]);
                const std::complex<double> r = s * multiplier(kx, ky);
                work[i][0] = r.real();
                work[i][1] = r.imag();
            }
        }
        inverse.execute();
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = work[i][0];
            max_imag = std::max(max_imag, std::fabs(work[i][1]));
        }
        return out;
    };

    using C = std::complex<double>;
    field.gx = derive([&](int kx, int) { return C(0.0, ud[kx]); });
    field.gy = derive([&](int, int ky) { return C(0.0, vd[ky]); });
    field.fxx = derive([&](int kx, int) { return C(-ud[kx] * ud[kx], 0.0); });
    field.fxy = derive([&](int kx, int ky) { return C(-ud[kx] * vd[ky], 0.0); });
    field.fyy = derive([&](int, int ky) { return C(-vd[ky] * vd[ky], 0.0); });

    const double norm = std::sqrt(signal_norm2);
    field.imag_residue = norm > 0.0 ? max_imag / norm : max_imag;
    return field;
}

std::vector<double> isophote_curvature(const GradientField& field) {
    const std::size_t n = field.gx.size();
    std::vector<double> kappa(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double gx = field.gx[i];
        const double gy = field.gy[i];
        const double g2 = gx * gx + gy * gy;
        if (g2 <= kDegenerateGrad * kDegenerateGrad) continue;
        const double num = gy * gy * field.fxx[i] - 2.0 * gx * gy * field.fxy[i] + gx * gx * field.fyy[i];
        kappa[i] = num / (g2 * std::sqrt(g2));
    }
    return kappa;
}

EdgeSet extract_edges(const GrayImage& img, const EdgeExtractionConfig& cfg) {
    cfg.validate();
    const GradientField field = spectral_gradient(img, cfg.sigma);
    const std::vector<double> kappa = isophote_curvature(field);

    const int w = field.width;
    const int h = field.height;
    const int margin = cfg.effective_border_margin();

    std::vector<double> mag(field.gx.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(field.gx[i], field.gy[i]);

    EdgeSet out;
    out.width = w;
    out.height = h;
    if (2 * margin >= w || 2 * margin >= h) return out;

    double max_mag = 0.0;
    for (int y = margin; y < h - margin; ++y) {
        for (int x = margin; x < w - margin; ++x) max_mag = std::max(max_mag, mag[field.index(x, y)]);
    }
    if (max_mag < kDegenerateGrad) return out;
    const double threshold = cfg.mag_threshold_rel * max_mag;

    for (int y = margin; y < h - margin; ++y) {
        for (int x = margin; x < w - margin; ++x) {
            const std::size_t i = field.index(x, y);
            const double m0 = mag[i];
            if (m0 < kDegenerateGrad || m0 < threshold) continue;
            const double dx = field.gx[i] / m0;
            const double dy = field.gy[i] / m0;
            const double m_minus = bilinear_periodic(mag, w, h, x - dx, y - dy);
            const double m_plus = bilinear_periodic(mag, w, h, x + dx, y + dy);
            // Asymmetric comparison keeps exactly one pixel of a two-pixel plateau.
            if (!(m0 > m_minus && m0 >= m_plus)) continue;

            double offset = 0.0;
            const double curv = m_minus - 2.0 * m0 + m_plus;
            if (curv < 0.0) {
                offset = std::clamp(0.5 * (m_minus - m_plus) / curv, -0.5, 0.5);
            }
            Edge e;
            e.x = x + offset * dx;
            e.y = y + offset * dy;
            e.theta = wrap_angle(std::atan2(field.gy[i], field.gx[i]) + std::numbers::pi / 2.0);
            e.kappa = kappa[i];
            e.confidence = std::min(1.0, m0 / max_mag);
            e.reliable = std::fabs(e.kappa) <= cfg.curvature_max;
            out.edges.push_back(e);
        }
    }
    return out;
}

} // namespace edgematch
