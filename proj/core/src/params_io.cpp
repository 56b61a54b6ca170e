#include "mlpbench/params_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "mlpbench/errors.hpp"

namespace mlpbench {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'L', 'P', 'W'};


template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::byte>((bits >> (8 * i)) & 0xFFU));
}

class Reader {
public:
    explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    template <typename T>
    T take() {
        using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
        if (pos_ + sizeof(U) > bytes_.size()) throw ShapeError("params file truncated at byte " + std::to_string(pos_));
        U bits = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            bits |= static_cast<U>(std::to_integer<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(U);
        return std::bit_cast<T>(bits);
    }

    void expect_magic() {
        if (bytes_.size() < kMagic.size()) throw ShapeError("params file too short for magic");
        for (std::size_t i = 0; i < kMagic.size(); ++i) {
            if (static_cast<char>(bytes_[i]) != kMagic[i]) throw ShapeError("params file: bad magic");
        }
        pos_ = kMagic.size();
    }

    [[nodiscard]] bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::byte> encode_params(const Params& params) {
    std::vector<std::byte> out;
    for (const char c : kMagic) out.push_back(static_cast<std::byte>(c));
    put_le(out, static_cast<std::uint32_t>(params.layers.size()));
    for (const Layer& layer : params.layers) {
        put_le(out, static_cast<std::uint32_t>(layer.weights.rows()));
        put_le(out, static_cast<std::uint32_t>(layer.weights.cols()));
        for (const double v : layer.weights.data()) put_le(out, v);
        for (const double v : layer.biases.data()) put_le(out, v);
    }
    return out;
}

Params decode_params(std::span<const std::byte> bytes) {
    Reader in(bytes);
    in.expect_magic();
    const auto count = in.take<std::uint32_t>();
    Params params;
    for (std::uint32_t l = 0; l < count; ++l) {
        const auto fan_in = in.take<std::uint32_t>();
        const auto fan_out = in.take<std::uint32_t>();
        if (fan_in == 0 || fan_out == 0) throw ShapeError("params file: zero-sized layer " + std::to_string(l));
        if (!params.layers.empty() && params.layers.back().weights.cols() != fan_in) {
            throw ShapeError("params file: layer " + std::to_string(l) + " fan_in does not chain");
        }
        std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
        for (double& v : w) v = in.take<double>();
        std::vector<double> b(fan_out);
        for (double& v : b) v = in.take<double>();
        params.layers.push_back({Matrix(fan_in, fan_out, std::move(w)), Matrix(1, fan_out, std::move(b))});
    }
    if (!in.done()) throw ShapeError("params file: trailing bytes after last layer");
    return params;
}

void write_params_file(const std::filesystem::path& path, const Params& params) {
    const auto bytes = encode_params(params);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Params read_params_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> bytes(raw.size());
    std::memcpy(bytes.data(), raw.data(), raw.size());
    return decode_params(bytes);
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const std::byte b : bytes) {
        hash ^= std::to_integer<std::uint64_t>(b);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t params_digest(const Params& params) { return fnv1a64(encode_params(params)); }

}  // namespace mlpbench
