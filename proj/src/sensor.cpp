#include "ircard/sensor.hpp"

#include <cmath>
#include <numbers>

namespace ircard::sensor {

uint8_t crc8(std::span<const uint8_t> data) {
    uint8_t crc = 0x00;
    for (uint8_t byte : data) {
        crc ^= byte;
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 0x80) ? static_cast<uint8_t>((crc << 1) ^ 0x07)
                               : static_cast<uint8_t>(crc << 1);
    }
    return crc;
}

double ChipModel::next_noise() {
    if (!rng_ready_ || rng_seed_ != seed) {
        rng_.seed(seed);
        rng_seed_ = seed;
        rng_ready_ = true;
        has_spare_ = false;
    }
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    auto uniform = [this]() { return (rng_() >> 11) * 0x1.0p-53; };
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double frequency_of(ChipModel& chip, double die_temperature_c, bool draw_noise) {
    if (chip.base_frequency <= 0.0) throw DomainError("base_frequency must be positive");
    if (chip.slope == 0.0) throw DomainError("chip slope must be nonzero");
    if (chip.noise_sigma < 0.0) throw DomainError("noise_sigma must be >= 0");

    double f = chip.base_frequency +
               chip.slope * (die_temperature_c - chip.reference_temperature);
    if (draw_noise && chip.noise_sigma > 0.0) f += chip.noise_sigma * chip.next_noise();
    if (f <= 0.0) throw DomainError("chip frequency would be non-positive");
    return f;
}

namespace {

uint8_t address_of(int row, int col) {
    if (row < 0 || row > 15 || col < 0 || col > 15)
        throw DomainError("pixel address out of the 16x16 range");
    return static_cast<uint8_t>((row << 4) | col);
}

}  // namespace

std::array<uint8_t, kRequestSize> encode_request(int row, int col) {
    const uint8_t addr = address_of(row, col);
    return {kRequestSync, addr, static_cast<uint8_t>(kRequestSync ^ addr)};
}

Request decode_request(std::span<const uint8_t> bytes) {
    if (bytes.size() != kRequestSize)
        throw FramingError("request frame must be exactly 3 bytes");
    if (bytes[0] != kRequestSync) throw FramingError("bad request sync byte");
    if (static_cast<uint8_t>(bytes[0] ^ bytes[1]) != bytes[2])
        throw IntegrityError("request checksum mismatch");
    return Request{bytes[1] >> 4, bytes[1] & 0x0F};
}

std::array<uint8_t, kResponseSize> encode_response(int row, int col,
                                                   uint32_t frequency_hz) {
    const uint8_t addr = address_of(row, col);
    std::array<uint8_t, kResponseSize> frame{};
    frame[0] = kResponseSync;
    frame[1] = addr;
    frame[2] = static_cast<uint8_t>(frequency_hz & 0xFF);
    frame[3] = static_cast<uint8_t>((frequency_hz >> 8) & 0xFF);
    frame[4] = static_cast<uint8_t>((frequency_hz >> 16) & 0xFF);
    frame[5] = static_cast<uint8_t>((frequency_hz >> 24) & 0xFF);
    frame[6] = crc8(std::span(frame).subspan(1, 5));
    return frame;
}

Response decode_response(std::span<const uint8_t> bytes) {
    if (bytes.size() != kResponseSize)
        throw FramingError("response frame must be exactly 7 bytes");
    if (bytes[0] != kResponseSync) throw FramingError("bad response sync byte");
    if (crc8(bytes.subspan(1, 5)) != bytes[6])
        throw IntegrityError("response CRC mismatch");
    const uint32_t f = static_cast<uint32_t>(bytes[2]) |
                       (static_cast<uint32_t>(bytes[3]) << 8) |
                       (static_cast<uint32_t>(bytes[4]) << 16) |
                       (static_cast<uint32_t>(bytes[5]) << 24);
    return Response{bytes[1] >> 4, bytes[1] & 0x0F, f};
}

std::vector<TimedFrame> scan_cycle(const std::vector<double>& die_temperatures,
                                   std::vector<ChipModel>& chips, int rows, int cols,
                                   const ScanOptions& opts) {
    const size_t count = static_cast<size_t>(rows) * static_cast<size_t>(cols);
    if (rows < 1 || cols < 1 || rows > 16 || cols > 16)
        throw DomainError("grid must fit the 16x16 address space");
    if (die_temperatures.size() != count)
        throw DomainError("one die temperature per pixel required");
    if (chips.size() != count) throw DomainError("one chip per pixel required");
    if (!opts.dead.empty() && opts.dead.size() != count)
        throw DomainError("dead mask must match the grid");
    if (!(opts.poll_interval > 0.0)) throw DomainError("poll interval must be positive");

    std::vector<TimedFrame> frames;
    frames.reserve(count);
    size_t slot = 0;
    for (int row = 0; row < rows; ++row) {
        for (int col = 0; col < cols; ++col, ++slot) {
            if (!opts.dead.empty() && opts.dead[slot]) continue;
            const double f =
                frequency_of(chips[slot], die_temperatures[slot], opts.draw_noise);
            TimedFrame frame;
            frame.timestamp = opts.start_time + static_cast<double>(slot) * opts.poll_interval;
            frame.bytes =
                encode_response(row, col, static_cast<uint32_t>(std::llround(f)));
            frames.push_back(frame);
        }
    }
    return frames;
}

}  // namespace ircard::sensor
