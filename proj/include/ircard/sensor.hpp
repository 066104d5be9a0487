#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ircard/errors.hpp"

namespace ircard::sensor {

inline constexpr uint8_t kRequestSync = 0x02;
inline constexpr uint8_t kResponseSync = 0xAA;
inline constexpr size_t kRequestSize = 3;
inline constexpr size_t kResponseSize = 7;

// CRC-8: polynomial 0x07, init 0x00, no reflection, no final XOR.
// Check value over ASCII "123456789" is 0xF4.
uint8_t crc8(std::span<const uint8_t> data);

// Frequency-output thermal test die. Parameters are immutable in spirit; the
// noise stream is a per-instance sequential generator (reseeded if `seed` is
// reassigned), so readings from one chip must be serialized.
struct ChipModel {
    double base_frequency = 400000.0;   // Hz at the reference temperature
    double slope = -2500.0;             // Hz per degC
    double reference_temperature = 21.0;  // degC
    double noise_sigma = 50.0;          // Hz, Gaussian per reading
    uint64_t seed = 1;

    // Standard-normal draw from the chip's stream. Box-Muller over raw
    // mt19937_64 bits so sequences are identical across platforms.
    double next_noise();

  private:
    std::mt19937_64 rng_{0};
    uint64_t rng_seed_ = 0;
    bool rng_ready_ = false;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// f = base + slope * (T - reference) (+ noise). Throws DomainError if the
// result would be non-positive (absurd parameters, not a measurement).
double frequency_of(ChipModel& chip, double die_temperature_c, bool draw_noise);

struct Request {
    int row = 0;
    int col = 0;
};

struct Response {
    int row = 0;
    int col = 0;
    uint32_t frequency_hz = 0;
};

// Request: [0x02, addr, 0x02 ^ addr] with addr = (row << 4) | col.
std::array<uint8_t, kRequestSize> encode_request(int row, int col);
Request decode_request(std::span<const uint8_t> bytes);

// Response: [0xAA, addr, f0..f3 little-endian Hz, crc8(addr..f3)].
std::array<uint8_t, kResponseSize> encode_response(int row, int col,
                                                   uint32_t frequency_hz);
Response decode_response(std::span<const uint8_t> bytes);

struct TimedFrame {
    double timestamp = 0.0;  // seconds
    std::array<uint8_t, kResponseSize> bytes{};
};

struct ScanOptions {
    double poll_interval = 0.1;  // seconds per pixel slot
    double start_time = 0.0;
    bool draw_noise = true;
    std::vector<char> dead;  // row-major; non-zero = pixel never answers
};

// One full poll of the card in row-major address order: one response frame
// per live pixel, timestamps spaced by the poll interval (dead pixels
// consume their slot silently).
std::vector<TimedFrame> scan_cycle(const std::vector<double>& die_temperatures,
                                   std::vector<ChipModel>& chips, int rows, int cols,
                                   const ScanOptions& opts = {});

}  // namespace ircard::sensor
