#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stsa {

// Mono WAV I/O, 16-bit PCM and 32-bit IEEE float.
struct Wav {
    enum class Format { Pcm16, Float32 };
    std::vector<double> samples; // normalized to [-1, 1] for PCM input
    double sample_rate = 16000.0;
    Format format = Format::Pcm16;
};

// Throws InputError for missing files, non-mono channels, or unsupported
// sample formats.
Wav read_wav(const std::string& path);

void write_wav(const std::string& path, const Wav& wav);

} // namespace stsa
