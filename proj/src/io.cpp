#include <ellseg/io.hpp>

#include <png.h>

#include "json.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ellseg::io {

namespace fs = std::filesystem;

namespace {

fs::path temp_path(const fs::path& target) {
    fs::path tmp = target;
    tmp += ".tmp";
    return tmp;
}

void commit(const fs::path& tmp, const fs::path& target) {
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move " + tmp.string() + " into place");
    }
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

float read_le_float(const unsigned char* bytes) {
    std::uint32_t bits = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
                         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
    return std::bit_cast<float>(bits);
}

void write_le_float(float value, unsigned char* bytes) {
    const auto bits = std::bit_cast<std::uint32_t>(value);
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFFu);
}

}  // namespace

GrayImage read_png(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw ReadError("cannot read " + path.string());
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw SchemaError("not a PNG file: " + path.string() + " (" + image.message + ")");
    }
    if ((image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_LINEAR)) != 0) {
        png_image_free(&image);
        throw SchemaError("expected an 8-bit single-channel PNG: " + path.string());
    }
    image.format = PNG_FORMAT_GRAY;
    GrayImage out(static_cast<int>(image.width), static_cast<int>(image.height));
    if (!png_image_finish_read(&image, nullptr, out.data().data(), 0, nullptr)) {
        throw SchemaError("corrupt PNG: " + path.string() + " (" + image.message + ")");
    }
    return out;
}

void write_png(const fs::path& path, const GrayImage& img) {
    ensure_parent(path);
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    const fs::path tmp = temp_path(path);
    if (!png_image_write_to_file(&image, tmp.c_str(), 0, img.data().data(), 0, nullptr)) {
        throw std::runtime_error("cannot write " + path.string() + " (" + image.message + ")");
    }
    commit(tmp, path);
}

void write_text(const fs::path& path, const std::string& content) {
    ensure_parent(path);
    const fs::path tmp = temp_path(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + path.string());
    }
    commit(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ReadError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path sidecar_path(const fs::path& tensor) {
    fs::path p = tensor;
    p.replace_extension(".json");
    return p;
}

ProbMaps read_prob_maps(const fs::path& tensor) {
    const fs::path side = sidecar_path(tensor);
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_text(side));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("malformed sidecar " + side.string() + ": " + e.what());
    }
    if (!meta.is_object() || !meta.contains("width") || !meta.contains("height") || !meta.contains("channels") ||
        !meta["width"].is_number_integer() || !meta["height"].is_number_integer() ||
        !meta["channels"].is_number_integer()) {
        throw SchemaError("sidecar " + side.string() + " needs integer width, height and channels");
    }
    const long long width = meta["width"];
    const long long height = meta["height"];
    const long long channels = meta["channels"];
    if (channels != 3 || width <= 0 || height <= 0) {
        throw SchemaError("tensor " + tensor.string() + " must have 3 channels and positive size");
    }

    const std::string bytes = read_text(tensor);
    const std::size_t expected = static_cast<std::size_t>(3 * width * height) * 4;
    if (bytes.size() != expected) {
        throw SchemaError("tensor " + tensor.string() + " holds " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(expected));
    }
    ProbMaps maps(static_cast<int>(width), static_cast<int>(height));
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t plane = static_cast<std::size_t>(width * height);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane; ++i) {
            maps.channels[c][i] = read_le_float(raw + 4 * (c * plane + i));
        }
    }
    if (!maps.is_valid()) throw SchemaError("tensor " + tensor.string() + " contains non-finite values");
    return maps;
}

void write_prob_maps(const fs::path& tensor, const ProbMaps& maps) {
    const std::size_t plane = maps.background().size();
    std::string bytes(3 * plane * 4, '\0');
    auto* raw = reinterpret_cast<unsigned char*>(bytes.data());
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane; ++i) {
            write_le_float(static_cast<float>(maps.channels[c][i]), raw + 4 * (c * plane + i));
        }
    }
    write_text(tensor, bytes);
    nlohmann::ordered_json meta;
    meta["width"] = maps.width();
    meta["height"] = maps.height();
    meta["channels"] = 3;
    write_text(sidecar_path(tensor), meta.dump() + "\n");
}

}  // namespace ellseg::io
