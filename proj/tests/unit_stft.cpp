#include <doctest.h>

#include "oracles.hpp"
#include "stsa/errors.hpp"
#include "stsa/stft.hpp"
#include "stsa/wav.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace stsa;

namespace {

std::vector<double> random_signal(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    return x;
}

double interior_rel_error(const std::vector<double>& x, const std::vector<double>& y,
                          const FrameGeometry& geom) {
    double e = 0.0, n = 0.0;
    const std::size_t lo = geom.window_len;
    const std::size_t hi = std::min(x.size(), y.size()) - geom.window_len;
    for (std::size_t i = lo; i < hi; ++i) {
        const double d = x[i] - y[i];
        e += d * d;
        n += x[i] * x[i];
    }
    return std::sqrt(e / n);
}

} // namespace

TEST_CASE("geometry defaults and validation") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    CHECK(g.window_len == 512);
    CHECK(g.hop == 256);
    CHECK(g.fft_len == 512);
    CHECK(g.bins() == 257);
    CHECK_NOTHROW(g.validate());

    FrameGeometry bad = g;
    bad.fft_len = 500; // not a power of two
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    FrameGeometry bad_hop = g;
    bad_hop.hop = 300; // violates constant overlap-add
    CHECK_THROWS_AS(bad_hop.validate(), ConfigError);
}

TEST_CASE("analyze trivial inputs") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);

    SUBCASE("zero signal") {
        std::vector<double> x(2048, 0.0);
        Spectrogram s = analyze(x, g);
        CHECK(s.num_frames() == (2048 - 512) / 256 + 1);
        for (const auto& f : s.frames)
            for (const auto& c : f) CHECK(std::abs(c) == 0.0);
    }

    SUBCASE("unit impulse at sample 0") {
        std::vector<double> x(1024, 0.0);
        x[0] = 1.0;
        Spectrogram s = analyze(x, g);
        const double w0 = g.window()[0];
        for (const auto& c : s.frames[0]) CHECK(std::abs(c - std::complex<double>(w0)) <= 1e-15);
    }

    SUBCASE("1 kHz sine peaks at bin 32") {
        std::vector<double> x(16000);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::sin(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(i) / 16000.0);
        Spectrogram s = analyze(x, g);
        for (std::size_t p = 1; p + 1 < s.num_frames(); ++p) {
            std::size_t kmax = 0;
            for (std::size_t k = 1; k < s.frames[p].size(); ++k)
                if (std::abs(s.frames[p][k]) > std::abs(s.frames[p][kmax])) kmax = k;
            CHECK(kmax == 32);
        }
    }

    SUBCASE("too-short signal rejected") {
        std::vector<double> x(100, 0.0);
        CHECK_THROWS_AS(analyze(x, g), InputError);
    }
}

TEST_CASE("analyze matches a direct DFT") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    auto x = random_signal(1024, 3);
    Spectrogram s = analyze(x, g);
    const auto win = g.window();
    std::vector<double> frame(512);
    for (std::size_t n = 0; n < 512; ++n) frame[n] = win[n] * x[256 + n]; // frame 1
    const auto ref = oracle::dft_onesided(frame);
    for (std::size_t k = 0; k < ref.size(); ++k)
        CHECK(std::abs(s.frames[1][k] - ref[k]) <= 1e-9 * (1.0 + std::abs(ref[k])));
}

TEST_CASE("perfect reconstruction on 100 random signals") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    for (unsigned seed = 0; seed < 100; ++seed) {
        auto x = random_signal(4096, seed);
        auto y = synthesize(analyze(x, g));
        CHECK(interior_rel_error(x, y, g) <= 1e-10);
    }
}

TEST_CASE("linearity of analyze") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    auto x = random_signal(2048, 5);
    auto y = random_signal(2048, 6);
    std::vector<double> z(2048);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = 2.0 * x[i] - 0.5 * y[i];
    auto sx = analyze(x, g), sy = analyze(y, g), sz = analyze(z, g);
    for (std::size_t p = 0; p < sz.num_frames(); ++p)
        for (std::size_t k = 0; k < sz.frames[p].size(); ++k) {
            const auto want = 2.0 * sx.frames[p][k] - 0.5 * sy.frames[p][k];
            CHECK(std::abs(sz.frames[p][k] - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
}

TEST_CASE("amplitude scaling is linear through synthesis") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    auto x = random_signal(4096, 9);
    Spectrogram s = analyze(x, g);
    for (auto& f : s.frames)
        for (auto& c : f) c *= 0.5;
    auto y = synthesize(s);
    double ny = 0.0, nx = 0.0;
    for (std::size_t i = g.window_len; i + g.window_len < x.size(); ++i) {
        ny += y[i] * y[i];
        nx += x[i] * x[i];
    }
    CHECK(std::sqrt(ny) == doctest::Approx(0.5 * std::sqrt(nx)).epsilon(1e-9));
}

TEST_CASE("Parseval consistency per frame") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    auto x = random_signal(1024, 13);
    Spectrogram s = analyze(x, g);
    const auto win = g.window();
    double et = 0.0;
    for (std::size_t n = 0; n < 512; ++n) {
        const double v = win[n] * x[n];
        et += v * v;
    }
    double ef = 0.0;
    for (std::size_t k = 0; k < s.frames[0].size(); ++k) {
        const double scale = (k == 0 || k == 256) ? 1.0 : 2.0; // conjugate bins
        ef += scale * std::norm(s.frames[0][k]);
    }
    CHECK(et == doctest::Approx(ef / 512.0).epsilon(1e-9));
}

TEST_CASE("window_phase_response properties") {
    FrameGeometry g = FrameGeometry::for_rate(16000.0);
    CHECK(window_phase_response(g, 0.0) == doctest::Approx(0.0));

    // direct DTFT oracle at offset 0.5
    const auto win = g.window();
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < win.size(); ++n)
        acc += win[n] * std::polar(1.0, -2.0 * std::numbers::pi * 0.5 * static_cast<double>(n) / 512.0);
    CHECK(window_phase_response(g, 0.5) == doctest::Approx(std::arg(acc)).epsilon(1e-12));

    // the frame-start time reference gives a linear phase -pi * offset
    // plus an even magnitude-sign term, so theta(e) + theta(-e) == 0
    // modulo 2 pi
    for (double e : {0.1, 0.25, 0.4}) {
        const double s = window_phase_response(g, e) + window_phase_response(g, -e);
        const double wrapped = std::remainder(s, 2.0 * std::numbers::pi);
        CHECK(std::abs(wrapped) <= 1e-10);
    }
}

TEST_CASE("wav round trip") {
    auto x = random_signal(4000, 17);
    for (auto& v : x) v *= 0.1;
    Wav w;
    w.samples = x;
    w.sample_rate = 16000.0;

    SUBCASE("float32") {
        w.format = Wav::Format::Float32;
        write_wav("test_roundtrip_f32.wav", w);
        Wav r = read_wav("test_roundtrip_f32.wav");
        REQUIRE(r.samples.size() == x.size());
        CHECK(r.sample_rate == 16000.0);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(std::abs(r.samples[i] - x[i]) <= 1e-7);
        std::remove("test_roundtrip_f32.wav");
    }

    SUBCASE("pcm16") {
        w.format = Wav::Format::Pcm16;
        write_wav("test_roundtrip_p16.wav", w);
        Wav r = read_wav("test_roundtrip_p16.wav");
        REQUIRE(r.samples.size() == x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(std::abs(r.samples[i] - x[i]) <= 1.0 / 32000.0);
        std::remove("test_roundtrip_p16.wav");
    }

    SUBCASE("missing file") { CHECK_THROWS_AS(read_wav("no_such_file.wav"), InputError); }
}
