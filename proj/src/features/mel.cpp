#include "features/mel.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "common/errors.hpp"

namespace ssc {

namespace {

constexpr double kMelFmin = 50.0;
constexpr double kMelFmaxCap = 14000.0;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / double(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double band_edge(int sample_rate) {
    return std::min(kMelFmaxCap, sample_rate / 2.0);
}

} // namespace

std::vector<double> mel_band_centers(int sample_rate) {
    const double mel_lo = hz_to_mel(kMelFmin);
    const double mel_hi = hz_to_mel(band_edge(sample_rate));
    std::vector<double> centers(kMelBands);
    for (int b = 0; b < kMelBands; ++b) {
        const double m = mel_lo + (mel_hi - mel_lo) * double(b + 1) / (kMelBands + 1);
        centers[b] = mel_to_hz(m);
    }
    return centers;
}

MelSpectrogram log_mel(const std::vector<float>& waveform, int sample_rate) {
    if (sample_rate <= 0) throw DomainError("sample rate must be positive");
    const double fmax = band_edge(sample_rate);
    if (sample_rate <= 2.0 * kMelFmin)
        throw DomainError("sample rate " + std::to_string(sample_rate) +
                          " too low for the mel filterbank");

    const int win = int(std::lround(kMelWindowMs * 1e-3 * sample_rate));
    const int hop = int(std::lround(kMelHopMs * 1e-3 * sample_rate));
    if (int(waveform.size()) < win)
        throw TooShortError("waveform of " + std::to_string(waveform.size()) +
                            " samples is shorter than one 32 ms window (" +
                            std::to_string(win) + " samples)");

    const std::size_t nfft = next_pow2(std::size_t(win));
    const int n_bins = int(nfft / 2 + 1);
    const int n_frames = int(waveform.size() / std::size_t(hop));

    std::vector<double> window(win);
    for (int i = 0; i < win; ++i)
        window[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (win - 1));

    // Triangular mel filterbank on the power spectrum.
    const double mel_lo = hz_to_mel(kMelFmin);
    const double mel_hi = hz_to_mel(fmax);
    std::vector<double> mel_pts(kMelBands + 2);
    for (int i = 0; i < kMelBands + 2; ++i)
        mel_pts[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (kMelBands + 1));
    std::vector<std::vector<std::pair<int, double>>> bank(kMelBands);
    const double hz_per_bin = double(sample_rate) / double(nfft);
    for (int b = 0; b < kMelBands; ++b) {
        const double fl = mel_pts[b], fc = mel_pts[b + 1], fr = mel_pts[b + 2];
        for (int k = 0; k < n_bins; ++k) {
            const double f = k * hz_per_bin;
            double w = 0.0;
            if (f > fl && f < fc)
                w = (f - fl) / (fc - fl);
            else if (f >= fc && f < fr)
                w = (fr - f) / (fr - fc);
            if (w > 0.0) bank[b].emplace_back(k, w);
        }
    }

    MelSpectrogram out;
    out.n_frames = n_frames;
    out.values.assign(std::size_t(n_frames) * kMelBands, 0.f);

    std::vector<std::complex<double>> buf(nfft);
    std::vector<double> power(n_bins);
    const long n = long(waveform.size());
    for (int t = 0; t < n_frames; ++t) {
        const long center = long(t) * hop;
        const long start = center - win / 2;
        for (std::size_t i = 0; i < nfft; ++i) buf[i] = 0.0;
        for (int i = 0; i < win; ++i) {
            const long idx = start + i;
            if (idx >= 0 && idx < n) buf[i] = double(waveform[idx]) * window[i];
        }
        fft(buf);
        for (int k = 0; k < n_bins; ++k) power[k] = std::norm(buf[k]);
        for (int b = 0; b < kMelBands; ++b) {
            double e = 0.0;
            for (const auto& [k, w] : bank[b]) e += w * power[k];
            out.values[std::size_t(t) * kMelBands + b] =
                float(std::log(std::max(e, kLogFloor)));
        }
    }
    return out;
}

} // namespace ssc
