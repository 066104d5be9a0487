#include "ircard/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ircard::io {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, mode);
    if (!out) throw FormatError(path + ": cannot open for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open for reading");
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& path, size_t line_no, const std::string& field) {
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
        ++used;
    if (field.empty() || used != field.size())
        throw FormatError(path + ": line " + std::to_string(line_no) +
                          " has a non-numeric field '" + field + "'");
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

void write_series_csv(const std::string& path, const SeriesTable& table) {
    if (table.values.rows() != static_cast<Eigen::Index>(table.times.size()) ||
        table.values.cols() != static_cast<Eigen::Index>(table.columns.size()))
        throw DomainError("series table dimensions are inconsistent");

    std::ofstream out = open_out(path);
    out << "time_s";
    for (const auto& col : table.columns) out << ',' << col;
    out << '\n';
    for (size_t i = 0; i < table.times.size(); ++i) {
        out << format_number(table.times[i]);
        for (Eigen::Index j = 0; j < table.values.cols(); ++j)
            out << ',' << format_number(table.values(static_cast<Eigen::Index>(i), j));
        out << '\n';
    }
    if (!out) throw FormatError(path + ": write failed");
}

SeriesTable read_series_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ": empty file, expected a header row");
    const std::vector<std::string> header = split_fields(strip_cr(line));
    if (header.empty() || header[0] != "time_s")
        throw FormatError(path + ": header must start with 'time_s'");

    SeriesTable table;
    table.columns.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw FormatError(path + ": line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& field : fields) row.push_back(parse_number(path, line_no, field));
        table.times.push_back(row[0]);
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.columns.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < table.columns.size(); ++j)
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j + 1];
    return table;
}

void write_map_csv(const std::string& path, const Eigen::MatrixXd& map) {
    if (map.rows() < 1 || map.cols() < 1) throw DomainError("map must be non-empty");
    std::ofstream out = open_out(path);
    for (Eigen::Index row = 0; row < map.rows(); ++row) {
        for (Eigen::Index col = 0; col < map.cols(); ++col) {
            if (col) out << ',';
            out << format_number(map(row, col));
        }
        out << '\n';
    }
    if (!out) throw FormatError(path + ": write failed");
}

Eigen::MatrixXd read_map_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (!rows.empty() && fields.size() != rows.front().size())
            throw FormatError(path + ": line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(rows.front().size()) + " (ragged grid)");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& field : fields) row.push_back(parse_number(path, line_no, field));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError(path + ": no numeric rows");

    Eigen::MatrixXd map(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j)
            map(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return map;
}

namespace {
constexpr char kSamplesHeader[] = "time_s,row,col,plate_c,distance_m,frequency_hz";
}

void write_samples_csv(const std::string& path,
                       const std::vector<calibration::CalSample>& samples) {
    std::ofstream out = open_out(path);
    out << kSamplesHeader << '\n';
    for (const auto& s : samples) {
        out << format_number(s.timestamp) << ',' << s.row << ',' << s.col << ','
            << format_number(s.plate_temperature) << ',' << format_number(s.distance)
            << ',' << format_number(s.frequency) << '\n';
    }
    if (!out) throw FormatError(path + ": write failed");
}

std::vector<calibration::CalSample> read_samples_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kSamplesHeader)
        throw FormatError(path + ": expected header '" + kSamplesHeader + "'");

    std::vector<calibration::CalSample> samples;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 6)
            throw FormatError(path + ": line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected 6");
        calibration::CalSample s;
        s.timestamp = parse_number(path, line_no, fields[0]);
        s.row = static_cast<int>(parse_number(path, line_no, fields[1]));
        s.col = static_cast<int>(parse_number(path, line_no, fields[2]));
        s.plate_temperature = parse_number(path, line_no, fields[3]);
        s.distance = parse_number(path, line_no, fields[4]);
        s.frequency = parse_number(path, line_no, fields[5]);
        samples.push_back(s);
    }
    return samples;
}

std::array<uint8_t, 3> hot_rgb(double v) {
    v = std::clamp(v, 0.0, 1.0);
    auto channel = [](double x) {
        return static_cast<uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
    };
    return {channel(3.0 * v), channel(3.0 * v - 1.0), channel(3.0 * v - 2.0)};
}

Heatmap render_heatmap(const Eigen::MatrixXd& map, int cell_size) {
    if (map.rows() < 1 || map.cols() < 1) throw DomainError("map must be non-empty");
    if (cell_size < 1) throw DomainError("cell size must be at least 1 px");

    Heatmap image;
    image.cell_size = cell_size;
    image.width = static_cast<int>(map.cols()) * cell_size;
    image.height = static_cast<int>(map.rows()) * cell_size;
    image.lo = map.minCoeff();
    image.hi = map.maxCoeff();
    const double span = image.hi - image.lo;

    image.gray.resize(static_cast<size_t>(image.width) * image.height);
    image.rgb.resize(image.gray.size());
    for (int py = 0; py < image.height; ++py) {
        for (int px = 0; px < image.width; ++px) {
            const double value = map(py / cell_size, px / cell_size);
            const double v = span > 0.0 ? (value - image.lo) / span : 0.0;
            const size_t at = static_cast<size_t>(py) * image.width + px;
            image.gray[at] = static_cast<uint8_t>(std::lround(v * 255.0));
            image.rgb[at] = hot_rgb(v);
        }
    }
    return image;
}

void write_pgm(const std::string& path, const Heatmap& image) {
    std::ofstream out = open_out(path, std::ios::binary);
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.gray.data()),
              static_cast<std::streamsize>(image.gray.size()));
    if (!out) throw FormatError(path + ": write failed");
}

void write_ppm(const std::string& path, const Heatmap& image) {
    std::ofstream out = open_out(path);
    out << "P3\n" << image.width << ' ' << image.height << "\n255\n";
    for (int py = 0; py < image.height; ++py) {
        for (int px = 0; px < image.width; ++px) {
            const auto& c = image.rgb[static_cast<size_t>(py) * image.width + px];
            if (px) out << ' ';
            out << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2]);
        }
        out << '\n';
    }
    if (!out) throw FormatError(path + ": write failed");
}

void write_scale_sidecar(const std::string& path, const Heatmap& image) {
    std::ofstream out = open_out(path);
    out << "min=" << format_number(image.lo) << '\n'
        << "max=" << format_number(image.hi) << '\n'
        << "cell_px=" << image.cell_size << '\n';
    if (!out) throw FormatError(path + ": write failed");
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
    static const char digits[] = "0123456789abcdef";
    std::string text;
    text.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        text.push_back(digits[b >> 4]);
        text.push_back(digits[b & 0x0F]);
    }
    return text;
}

std::vector<uint8_t> from_hex(const std::string& text) {
    auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError("invalid hex digit '" + std::string(1, c) + "'");
    };
    if (text.size() % 2 != 0) throw FormatError("odd-length hex string");
    std::vector<uint8_t> bytes;
    bytes.reserve(text.size() / 2);
    for (size_t i = 0; i < text.size(); i += 2)
        bytes.push_back(static_cast<uint8_t>(nibble(text[i]) * 16 + nibble(text[i + 1])));
    return bytes;
}

}  // namespace ircard::io
