#include "stsa/wav.hpp"
#include "stsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace stsa {

namespace {

std::uint32_t rd_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t rd_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void wr_u32(std::ofstream& f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    f.write(reinterpret_cast<const char*>(b), 4);
}
void wr_u16(std::ofstream& f, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    f.write(reinterpret_cast<const char*>(b), 2);
}

} // namespace

Wav read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open WAV file: " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 || std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        throw InputError("not a RIFF/WAVE file: " + path);

    std::uint16_t audio_format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* pcm = nullptr;
    std::size_t pcm_bytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const char* id = reinterpret_cast<const char*>(data.data() + pos);
        const std::uint32_t sz = rd_u32(data.data() + pos + 4);
        const unsigned char* body = data.data() + pos + 8;
        if (pos + 8 + sz > data.size()) break;
        if (std::memcmp(id, "fmt ", 4) == 0 && sz >= 16) {
            audio_format = rd_u16(body);
            channels = rd_u16(body + 2);
            sample_rate = rd_u32(body + 4);
            bits = rd_u16(body + 14);
        } else if (std::memcmp(id, "data", 4) == 0) {
            pcm = body;
            pcm_bytes = sz;
        }
        pos += 8 + sz + (sz & 1);
    }
    if (!pcm || sample_rate == 0) throw InputError("WAV file missing fmt/data chunks: " + path);
    if (channels != 1)
        throw InputError("only mono WAV input is supported (" + path + " has " + std::to_string(channels) + " channels)");

    Wav out;
    out.sample_rate = static_cast<double>(sample_rate);
    if (audio_format == 1 && bits == 16) {
        out.format = Wav::Format::Pcm16;
        const std::size_t n = pcm_bytes / 2;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int16_t s = static_cast<std::int16_t>(rd_u16(pcm + 2 * i));
            out.samples[i] = static_cast<double>(s) / 32768.0;
        }
    } else if (audio_format == 3 && bits == 32) {
        out.format = Wav::Format::Float32;
        const std::size_t n = pcm_bytes / 4;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            float v;
            std::memcpy(&v, pcm + 4 * i, 4);
            out.samples[i] = static_cast<double>(v);
        }
    } else {
        throw InputError("unsupported WAV sample format (want 16-bit PCM or 32-bit float): " + path);
    }
    return out;
}

void write_wav(const std::string& path, const Wav& wav) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot create WAV file: " + path);
    const std::uint32_t n = static_cast<std::uint32_t>(wav.samples.size());
    const bool pcm = wav.format == Wav::Format::Pcm16;
    const std::uint16_t bytes_per = pcm ? 2 : 4;
    const std::uint32_t data_bytes = n * bytes_per;
    f.write("RIFF", 4);
    wr_u32(f, 36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    wr_u32(f, 16);
    wr_u16(f, pcm ? 1 : 3);
    wr_u16(f, 1);
    wr_u32(f, static_cast<std::uint32_t>(std::lround(wav.sample_rate)));
    wr_u32(f, static_cast<std::uint32_t>(std::lround(wav.sample_rate)) * bytes_per);
    wr_u16(f, bytes_per);
    wr_u16(f, pcm ? 16 : 32);
    f.write("data", 4);
    wr_u32(f, data_bytes);
    for (double s : wav.samples) {
        if (pcm) {
            const double clamped = std::clamp(s, -1.0, 32767.0 / 32768.0);
            wr_u16(f, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(clamped * 32768.0))));
        } else {
            const float v = static_cast<float>(s);
            char b[4];
            std::memcpy(b, &v, 4);
            f.write(b, 4);
        }
    }
}

} // namespace stsa
