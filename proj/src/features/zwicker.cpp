#include "features/zwicker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "common/errors.hpp"
#include "features/calibration.hpp"

namespace ssc {

namespace {

constexpr int kThirdOctaveBands = 28; // 25 Hz .. 12.5 kHz
constexpr int kCriticalBands = 20;
constexpr double kBarkStep = 0.1;
constexpr int kBarkGrid = 240;

// Upper limits of the 20 approximated critical bands (Bark).
constexpr std::array<double, kCriticalBands> kBarkUpper = {
    0.9,  1.8,  2.8,  3.5,  4.4,  5.4,  6.6,  7.9,  9.2,  10.6,
    12.3, 13.8, 15.2, 16.7, 18.1, 19.3, 20.6, 21.8, 22.7, 23.6};

// Threshold in quiet per critical band (dB).
constexpr std::array<double, kCriticalBands> kThresholdQuietDb = {
    30, 18, 12, 8, 7, 6, 5, 4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3};

// Outer/middle ear transmission correction per critical band (dB,
// subtracted from the band level; negative values model the canal
// resonance gain around 2..4 kHz).
constexpr std::array<double, kCriticalBands> kEarCorrectionDb = {
    0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -0.5, -1.6, -3.2, -5.4, -5.6, -4.0,
    -1.5, 2.0, 5.0, 12.0};

// First third-octave band of each critical band; bands 25..250 Hz are
// grouped, 315 Hz upward map one-to-one.
constexpr std::array<int, kCriticalBands + 1> kGroupStart = {
    0, 6, 9, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25,
    26, 27, 28};

double third_octave_center(int band) {
    return 1000.0 * std::pow(2.0, double(band - 16) / 3.0);
}

double critical_band_center_hz(int cb) {
    // Geometric mean of the grouped third-octave centers.
    const int a = kGroupStart[cb], b = kGroupStart[cb + 1] - 1;
    return std::sqrt(third_octave_center(a) * third_octave_center(b));
}

// --- third-octave filterbank ------------------------------------------------

struct Biquad {
    double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
    double z1 = 0, z2 = 0;

    double step(double x) {
        const double y = b0 * x + z1;
        z1 = b1 * x - a1 * y + z2;
        z2 = b2 * x - a2 * y;
        return y;
    }
};

// Order-3 Butterworth bandpass as three biquad sections, designed by the
// analog prototype / bandpass transform / bilinear route.
std::vector<Biquad> design_third_octave(double fc, double fs) {
    using cd = std::complex<double>;
    const double f1 = fc / std::pow(2.0, 1.0 / 6.0);
    const double f2 = fc * std::pow(2.0, 1.0 / 6.0);
    const double w1 = 2.0 * fs * std::tan(M_PI * f1 / fs);
    const double w2 = 2.0 * fs * std::tan(M_PI * f2 / fs);
    const double w0 = std::sqrt(w1 * w2);
    const double bw = w2 - w1;

    // Order-3 lowpass prototype poles with non-negative imaginary part.
    const std::vector<cd> lp = {cd(-0.5, std::sqrt(3.0) / 2.0), cd(-1.0, 0.0)};

    std::vector<cd> poles; // one representative per conjugate pair
    for (const cd& p : lp) {
        const cd bp = bw * p;
        const cd disc = std::sqrt(bp * bp - 4.0 * w0 * w0);
        const cd r1 = (bp + disc) / 2.0;
        const cd r2 = (bp - disc) / 2.0;
        if (std::abs(p.imag()) < 1e-12) {
            // Real prototype pole: r1, r2 are a conjugate pair.
            poles.push_back(r1.imag() >= 0 ? r1 : r2);
        } else {
            poles.push_back(r1);
            poles.push_back(r2);
        }
    }

    std::vector<Biquad> sections;
    for (const cd& s : poles) {
        const cd zp = (2.0 * fs + s) / (2.0 * fs - s);
        Biquad q;
        q.b0 = 1.0;
        q.b1 = 0.0;
        q.b2 = -1.0; // zeros at z = +1 and z = -1
        q.a1 = -2.0 * zp.real();
        q.a2 = std::norm(zp);
        sections.push_back(q);
    }

    // Normalise to unity gain at the centre frequency.
    const double w = 2.0 * M_PI * fc / fs;
    const cd ejw = std::polar(1.0, w);
    const cd ej2w = std::polar(1.0, 2.0 * w);
    cd h(1.0, 0.0);
    for (const auto& q : sections)
        h *= (q.b0 - q.b2 / ej2w) / (1.0 + q.a1 / ejw + q.a2 / ej2w);
    const double g = 1.0 / std::abs(h);
    sections[0].b0 *= g;
    sections[0].b2 *= g;
    return sections;
}

// --- specific loudness ------------------------------------------------------

constexpr double kCompress = 0.23;
constexpr double kLowerSlopeDbPerBark = 27.0;
constexpr double kSilenceDb = -120.0;

int bark_to_band(double z) {
    for (int cb = 0; cb < kCriticalBands; ++cb)
        if (z < kBarkUpper[cb]) return cb;
    return kCriticalBands - 1;
}

// Integrated loudness (pre-calibration units) of 20 corrected critical-band
// levels via upper-slope spreading on the Bark grid.
double integrate_specific_loudness(const std::array<double, kCriticalBands>& level_db) {
    std::array<double, kBarkGrid> excitation_db;
    excitation_db.fill(kSilenceDb);
    for (int cb = 0; cb < kCriticalBands; ++cb) {
        const double level = level_db[cb];
        if (level <= kSilenceDb) continue;
        const double zl = cb == 0 ? 0.0 : kBarkUpper[cb - 1];
        const double zu = kBarkUpper[cb];
        const double fc = critical_band_center_hz(cb);
        // Level-dependent upper slope of the excitation pattern.
        const double upper_slope =
            std::min(-4.0, -24.0 - 230.0 / fc + 0.2 * level);
        for (int g = 0; g < kBarkGrid; ++g) {
            const double z = (g + 0.5) * kBarkStep;
            double e;
            if (z < zl)
                e = level - kLowerSlopeDbPerBark * (zl - z);
            else if (z <= zu)
                e = level;
            else
                e = level + upper_slope * (z - zu);
            excitation_db[g] = std::max(excitation_db[g], e);
        }
    }

    double total = 0.0;
    for (int g = 0; g < kBarkGrid; ++g) {
        const double z = (g + 0.5) * kBarkStep;
        const double ltq = kThresholdQuietDb[bark_to_band(z)];
        const double ratio = std::pow(10.0, (excitation_db[g] - ltq) / 10.0);
        const double n = std::pow(0.5 + 0.5 * ratio, kCompress) - 1.0;
        if (n > 0.0) total += n;
    }
    return total * kBarkStep;
}

std::array<double, kCriticalBands> group_and_correct(
    const std::vector<double>& third_octave_db) {
    std::array<double, kCriticalBands> out;
    for (int cb = 0; cb < kCriticalBands; ++cb) {
        double energy = 0.0;
        for (int b = kGroupStart[cb]; b < kGroupStart[cb + 1]; ++b)
            if (third_octave_db[b] > kSilenceDb)
                energy += std::pow(10.0, third_octave_db[b] / 10.0);
        out[cb] = energy > 0.0 ? 10.0 * std::log10(energy) - kEarCorrectionDb[cb]
                               : kSilenceDb;
    }
    return out;
}

// Scale fixing 1 sone := 1 kHz tone at 40 dB SPL. The tone lands in the
// third-octave band at index 16.
double sone_scale() {
    static const double scale = [] {
        std::vector<double> bands(kThirdOctaveBands, kSilenceDb);
        bands[16] = 40.0;
        return 1.0 / integrate_specific_loudness(group_and_correct(bands));
    }();
    return scale;
}

} // namespace

double stationary_loudness_from_bands(const std::vector<double>& band_db) {
    if (int(band_db.size()) != kThirdOctaveBands)
        throw ShapeError("expected " + std::to_string(kThirdOctaveBands) +
                         " third-octave band levels, got " +
                         std::to_string(band_db.size()));
    return sone_scale() * integrate_specific_loudness(group_and_correct(band_db));
}

LoudnessSeries zwicker_loudness(const std::vector<float>& pa_waveform,
                                int sample_rate) {
    if (sample_rate <= 0) throw DomainError("sample rate must be positive");
    const int hop = std::max(1, int(std::lround(kLoudnessHopMs * 1e-3 * sample_rate)));
    const int n_frames = int(pa_waveform.size() / std::size_t(hop));
    if (n_frames < 1)
        throw TooShortError("waveform of " + std::to_string(pa_waveform.size()) +
                            " samples is shorter than one 2 ms loudness frame");

    // Band energy smoothing and total-loudness attack/release constants.
    const double tau_energy = 0.020;
    const double alpha_e = 1.0 - std::exp(-1.0 / (tau_energy * sample_rate));
    const double tau_attack = 0.010, tau_release = 0.080;
    const double a_att = 1.0 - std::exp(-kLoudnessHopMs * 1e-3 / tau_attack);
    const double a_rel = 1.0 - std::exp(-kLoudnessHopMs * 1e-3 / tau_release);

    struct BandState {
        std::vector<Biquad> filt;
        double energy = 0.0;
        bool active = false;
    };
    std::vector<BandState> bands(kThirdOctaveBands);
    for (int b = 0; b < kThirdOctaveBands; ++b) {
        const double fc = third_octave_center(b);
        const double upper_edge = fc * std::pow(2.0, 1.0 / 6.0);
        if (upper_edge < 0.495 * sample_rate) {
            bands[b].filt = design_third_octave(fc, sample_rate);
            bands[b].active = true;
        }
    }

    LoudnessSeries out;
    out.n_frames = n_frames;
    out.values.resize(n_frames);

    std::vector<double> band_db(kThirdOctaveBands, kSilenceDb);
    double smoothed = 0.0;
    const double p0sq = kRefPressurePa * kRefPressurePa;

    std::size_t pos = 0;
    for (int t = 0; t < n_frames; ++t) {
        for (int i = 0; i < hop; ++i, ++pos) {
            const double x = pa_waveform[pos];
            for (auto& bs : bands) {
                if (!bs.active) continue;
                double y = x;
                for (auto& q : bs.filt) y = q.step(y);
                bs.energy += alpha_e * (y * y - bs.energy);
            }
        }
        for (int b = 0; b < kThirdOctaveBands; ++b)
            band_db[b] = bands[b].active && bands[b].energy > 0.0
                             ? 10.0 * std::log10(bands[b].energy / p0sq)
                             : kSilenceDb;
        const double n = sone_scale() *
                         integrate_specific_loudness(group_and_correct(band_db));
        const double alpha = n > smoothed ? a_att : a_rel;
        smoothed += alpha * (n - smoothed);
        out.values[t] = float(smoothed);
    }
    return out;
}

} // namespace ssc
