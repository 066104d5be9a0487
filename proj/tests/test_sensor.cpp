#include <cstring>
#include <random>

#include "doctest.h"
#include "ircard/sensor.hpp"
#include "support/oracles.hpp"

using namespace ircard::sensor;

TEST_CASE("crc8 check value and oracle agreement") {
    const uint8_t check[] = {'1', '2', '3', '4', '5', '6', '7', '8', '9'};
    CHECK(crc8(check) == 0xF4);
    CHECK(oracles::crc8_bitwise(check) == 0xF4);
    CHECK(crc8(std::span<const uint8_t>{}) == 0x00);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint8_t> data(rng() % 32);
        for (auto& b : data) b = static_cast<uint8_t>(rng());
        CHECK(crc8(data) == oracles::crc8_bitwise(data));
    }
}

TEST_CASE("chip frequency model") {
    ChipModel chip;
    CHECK(frequency_of(chip, 21.0, false) == 400000.0);
    // 40 degC rise costs 100 kHz.
    CHECK(frequency_of(chip, 61.0, false) == doctest::Approx(300000.0));
    CHECK(frequency_of(chip, 21.0, false) - frequency_of(chip, 61.0, false) ==
          doctest::Approx(100000.0));

    // Strictly monotone with the slope's sign.
    double prev = frequency_of(chip, 0.0, false);
    for (double t = 5.0; t <= 100.0; t += 5.0) {
        const double f = frequency_of(chip, t, false);
        CHECK(f < prev);
        prev = f;
    }

    // Seeded noise: unbiased and reproducible.
    chip.noise_sigma = 50.0;
    chip.seed = 77;
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += frequency_of(chip, 21.0, true);
    CHECK(std::abs(sum / 10000.0 - 400000.0) < 2.0);

    ChipModel again;
    again.noise_sigma = 50.0;
    again.seed = 77;
    double sum2 = 0.0;
    for (int i = 0; i < 10000; ++i) sum2 += frequency_of(again, 21.0, true);
    CHECK(sum == sum2);

    // Absurd parameters surface as errors rather than clamping silently.
    CHECK_THROWS_AS(frequency_of(chip, 1000.0, false), ircard::DomainError);
    ChipModel bad;
    bad.base_frequency = 0.0;
    CHECK_THROWS_AS(frequency_of(bad, 21.0, false), ircard::DomainError);
    bad = ChipModel{};
    bad.slope = 0.0;
    CHECK_THROWS_AS(frequency_of(bad, 21.0, false), ircard::DomainError);
}

TEST_CASE("request codec") {
    CHECK(encode_request(0, 2) == std::array<uint8_t, 3>{0x02, 0x02, 0x00});
    CHECK(encode_request(0, 0) == std::array<uint8_t, 3>{0x02, 0x00, 0x02});

    for (int row = 0; row < 16; ++row) {
        for (int col = 0; col < 16; ++col) {
            const auto bytes = encode_request(row, col);
            const Request r = decode_request(bytes);
            CHECK(r.row == row);
            CHECK(r.col == col);
        }
    }

    const uint8_t bad_sync[] = {0x03, 0x00, 0x03};
    CHECK_THROWS_AS(decode_request(bad_sync), ircard::FramingError);
    const uint8_t bad_chk[] = {0x02, 0x21, 0x00};
    CHECK_THROWS_AS(decode_request(bad_chk), ircard::IntegrityError);
    const uint8_t short_frame[] = {0x02, 0x21};
    CHECK_THROWS_AS(decode_request(short_frame), ircard::FramingError);
    CHECK_THROWS_AS(encode_request(16, 0), ircard::DomainError);
}

TEST_CASE("response codec round trip and layout") {
    const auto frame = encode_response(1, 1, 347500);
    CHECK(frame[0] == 0xAA);
    CHECK(frame[1] == 0x11);
    // 347500 = 0x00054D6C little-endian.
    CHECK(frame[2] == 0x6C);
    CHECK(frame[3] == 0x4D);
    CHECK(frame[4] == 0x05);
    CHECK(frame[5] == 0x00);
    CHECK(frame[6] == oracles::crc8_bitwise(std::span(frame).subspan(1, 5)));

    const Response r = decode_response(frame);
    CHECK(r.row == 1);
    CHECK(r.col == 1);
    CHECK(r.frequency_hz == 347500);

    std::mt19937_64 rng(11);
    for (int row = 0; row < 16; ++row) {
        for (int col = 0; col < 16; ++col) {
            const uint32_t f = static_cast<uint32_t>(rng());
            const Response back = decode_response(encode_response(row, col, f));
            CHECK(back.row == row);
            CHECK(back.col == col);
            CHECK(back.frequency_hz == f);
        }
    }
}

TEST_CASE("single-bit corruption is detected") {
    const auto frame = encode_response(2, 3, 391234);
    int detected = 0;
    for (int bit = 0; bit < 56; ++bit) {
        auto corrupted = frame;
        corrupted[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        try {
            decode_response(corrupted);
        } catch (const ircard::Error&) {
            ++detected;
        }
    }
    CHECK(detected >= 55);
}

TEST_CASE("codec totality on arbitrary bytes") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<uint8_t> junk(rng() % 12);
        for (auto& b : junk) b = static_cast<uint8_t>(rng());
        try {
            decode_response(junk);
        } catch (const ircard::FramingError&) {
        } catch (const ircard::IntegrityError&) {
        }
        try {
            decode_request(junk);
        } catch (const ircard::FramingError&) {
        } catch (const ircard::IntegrityError&) {
        }
    }
}

TEST_CASE("scan cycle order, timing and content") {
    const int rows = 4, cols = 4;
    std::vector<double> temps(16, 21.0);
    std::vector<ChipModel> chips(16);

    ScanOptions opts;
    opts.draw_noise = false;
    auto frames = scan_cycle(temps, chips, rows, cols, opts);
    REQUIRE(frames.size() == 16);
    for (size_t i = 0; i < frames.size(); ++i) {
        const Response r = decode_response(frames[i].bytes);
        CHECK(r.row == static_cast<int>(i) / cols);
        CHECK(r.col == static_cast<int>(i) % cols);
        CHECK(r.frequency_hz == 400000);
        CHECK(frames[i].timestamp == doctest::Approx(0.1 * static_cast<double>(i)));
    }

    std::vector<double> temps8(8, 21.0);
    std::vector<ChipModel> chips8(8);
    CHECK(scan_cycle(temps8, chips8, 2, 4, opts).size() == 8);

    opts.dead.assign(16, 0);
    opts.dead[5] = 1;  // B2 silent
    frames = scan_cycle(temps, chips, rows, cols, opts);
    CHECK(frames.size() == 15);
    // The dead pixel still consumes its poll slot.
    CHECK(frames[5].timestamp == doctest::Approx(0.6));
    CHECK(decode_response(frames[5].bytes).row == 1);
    CHECK(decode_response(frames[5].bytes).col == 2);

    CHECK_THROWS_AS(scan_cycle(temps8, chips, 4, 4, opts), ircard::DomainError);
}
