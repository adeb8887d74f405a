#include "vitcrypt/keys.hpp"

#include <charconv>
#include <sstream>

#include "vitcrypt/error.hpp"
#include "vitcrypt/image.hpp"

namespace vitcrypt {

Permutation fisher_yates(std::size_t n, SplitMix64& rng) {
    if (n == 0) throw ConfigError("cannot shuffle an empty index set");
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next() % (static_cast<std::uint64_t>(i) + 1));
        std::swap(p[i], p[j]);
    }
    return p;
}

bool is_permutation_of_iota(std::span<const std::size_t> p) noexcept {
    std::vector<bool> seen(p.size(), false);
    for (std::size_t v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

void require_permutation(std::span<const std::size_t> p, std::string_view what) {
    if (!is_permutation_of_iota(p)) {
        throw PermutationError(std::string(what) + " is not a permutation of 0.." + std::to_string(p.size()) +
                               "-1");
    }
}

Permutation invert_permutation(std::span<const std::size_t> p) {
    require_permutation(p, "permutation");
    Permutation q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
    return q;
}

std::size_t EncryptionKey::block_count() const noexcept { return block_count_for(block_size, height, width); }

std::size_t EncryptionKey::subblock_pixels() const noexcept { return subblock_pixels_for(block_size); }

EncryptionKey generate_key(std::uint64_t seed, std::size_t block_size, std::size_t height, std::size_t width) {
    validate_block_geometry(block_size, height, width);
    SplitMix64 rng(seed);
    EncryptionKey key;
    key.block_size = block_size;
    key.height = height;
    key.width = width;
    key.block_perm = fisher_yates(block_count_for(block_size, height, width), rng);
    key.subblock_perm = fisher_yates(subblock_pixels_for(block_size), rng);
    return key;
}

void validate_key(const EncryptionKey& key) {
    validate_block_geometry(key.block_size, key.height, key.width);
    if (key.block_perm.size() != key.block_count()) {
        throw GeometryError("K1 has " + std::to_string(key.block_perm.size()) + " entries, geometry needs " +
                            std::to_string(key.block_count()));
    }
    if (key.subblock_perm.size() != key.subblock_pixels()) {
        throw GeometryError("K2 has " + std::to_string(key.subblock_perm.size()) + " entries, geometry needs " +
                            std::to_string(key.subblock_pixels()));
    }
    require_permutation(key.block_perm, "K1");
    require_permutation(key.subblock_perm, "K2");
}

namespace {

void append_list(std::string& out, const Permutation& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(p[i]);
    }
}

std::size_t parse_uint(std::string_view s, std::string_view what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError("key file: bad integer '" + std::string(s) + "' in " + std::string(what));
    }
    return value;
}

std::string_view strip_prefix(std::string_view line, std::string_view prefix) {
    if (line.substr(0, prefix.size()) != prefix) {
        throw FormatError("key file: expected line starting with '" + std::string(prefix) + "'");
    }
    return line.substr(prefix.size());
}

Permutation parse_list(std::string_view s, std::string_view what) {
    Permutation out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(parse_uint(s.substr(0, comma), what));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

std::string serialize_key(const EncryptionKey& key) {
    validate_key(key);
    std::string out;
    out += std::string(kKeyMagic) + " " + std::to_string(kKeyVersion) + "\n";
    out += "M=" + std::to_string(key.block_size) + " H=" + std::to_string(key.height) +
           " W=" + std::to_string(key.width) + "\n";
    out += "K1=";
    append_list(out, key.block_perm);
    out += "\nK2=";
    append_list(out, key.subblock_perm);
    out += "\n";
    return out;
}

EncryptionKey parse_key(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    if (lines.size() != 4) {
        throw FormatError("key file: expected 4 lines, found " + std::to_string(lines.size()));
    }

    const std::string magic_line = std::string(kKeyMagic) + " ";
    const auto version = parse_uint(strip_prefix(lines[0], magic_line), "version");
    if (version != static_cast<std::size_t>(kKeyVersion)) {
        throw FormatError("key file: unsupported version " + std::to_string(version));
    }

    EncryptionKey key;
    std::istringstream geometry{std::string(lines[1])};
    std::string m, h, w, extra;
    if (!(geometry >> m >> h >> w) || (geometry >> extra)) {
        throw FormatError("key file: geometry line must be 'M=<int> H=<int> W=<int>'");
    }
    key.block_size = parse_uint(strip_prefix(m, "M="), "M");
    key.height = parse_uint(strip_prefix(h, "H="), "H");
    key.width = parse_uint(strip_prefix(w, "W="), "W");
    key.block_perm = parse_list(strip_prefix(lines[2], "K1="), "K1");
    key.subblock_perm = parse_list(strip_prefix(lines[3], "K2="), "K2");

    try {
        validate_key(key);
    } catch (const Error& e) {
        throw FormatError(std::string("key file: ") + e.what());
    }
    return key;
}

}  // namespace vitcrypt
