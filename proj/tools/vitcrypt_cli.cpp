// vitcrypt command-line tool.
//
// Exit codes: 0 success, 1 usage or validation error (including key/image
// geometry mismatch), 2 I/O error or malformed input file, 3 check failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vitcrypt/cipher.hpp"
#include "vitcrypt/error.hpp"
#include "vitcrypt/image.hpp"
#include "vitcrypt/keys.hpp"
#include "vitcrypt/keyspace.hpp"
#include "vitcrypt/metrics.hpp"
#include "vitcrypt/vit.hpp"

namespace fs = std::filesystem;
using namespace vitcrypt;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kCheckFailed = 3 };

struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t block_size = 16;
    std::size_t height = 224;
    std::size_t width = 224;
    std::string key_path;
    std::string input;
    std::string input2;
    std::string output;
    std::size_t resize = 1;
    std::size_t limit = 0;
    bool bits = false;
    bool floor_bits = false;
    bool report = false;
};

struct VitCheckConfig {
    std::uint64_t seed = 0;
    ToyVitConfig model;
    std::size_t trials = 20;
    double tol_property1 = 1e-5;
    double tol_embedding = 1e-6;
    double tol_forward = 1e-5;
    double control_min = 1e-2;
    bool break_position = false;
};

EncryptionKey load_key(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_key(std::string(bytes.begin(), bytes.end()));
}

int cmd_keygen(const RunConfig& cfg) {
    const EncryptionKey key = generate_key(cfg.seed, cfg.block_size, cfg.height, cfg.width);
    const std::string text = serialize_key(key);
    write_file(cfg.output, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    std::cout << "wrote key: N=" << key.block_count() << " blocks, S=" << key.subblock_pixels()
              << " pixels per sub-block -> " << cfg.output << "\n";
    return kOk;
}

int cmd_crypt(const RunConfig& cfg, bool forward) {
    const EncryptionKey key = load_key(cfg.key_path);
    const Image img = load_image_file(cfg.input);
    const Image out = forward ? encrypt(img, key) : decrypt(img, key);
    save_image_file(cfg.output, out);
    return kOk;
}

int cmd_keyspace(const RunConfig& cfg) {
    if (cfg.bits) {
        std::cout << keyspace_bits(cfg.block_size, cfg.height, cfg.width) << "\n";
    } else if (cfg.floor_bits) {
        std::cout << keyspace_floor_log2(cfg.block_size, cfg.height, cfg.width) << "\n";
    } else {
        std::cout << keyspace(cfg.block_size, cfg.height, cfg.width).to_decimal() << "\n";
    }
    return kOk;
}

int cmd_cifar_export(const RunConfig& cfg) {
    std::optional<CipherPlan> plan;
    if (!cfg.key_path.empty()) {
        const EncryptionKey key = load_key(cfg.key_path);
        if (key.height != kCifarSide * cfg.resize || key.width != kCifarSide * cfg.resize) {
            throw GeometryError("key is for " + std::to_string(key.height) + "x" + std::to_string(key.width) +
                                " images but exported images are " + std::to_string(kCifarSide * cfg.resize) +
                                "x" + std::to_string(kCifarSide * cfg.resize));
        }
        plan.emplace(key);
    }
    const auto records = load_cifar10_batch(read_file(cfg.input));

    std::error_code ec;
    fs::create_directories(cfg.output, ec);
    if (ec) throw IoError("cannot create directory '" + cfg.output + "': " + ec.message());

    const std::size_t count = cfg.limit ? std::min(cfg.limit, records.size()) : records.size();
    for (std::size_t i = 0; i < count; ++i) {
        Image img = resize_nearest(records[i].image, cfg.resize);
        if (plan) img = plan->encrypt(img);
        save_image_file(fs::path(cfg.output) / (std::to_string(i) + "_" + std::to_string(records[i].label) + ".ppm"),
                        img);
    }
    std::cout << "exported " << count << " images to " << cfg.output << "\n";
    return kOk;
}

int cmd_ssim(const RunConfig& cfg) {
    const Image a = load_image_file(cfg.input);
    const Image b = load_image_file(cfg.input2);
    if (!cfg.report) {
        std::printf("%.3f\n", ssim(a, b));
        return kOk;
    }
    const LeakageReport r = leakage_report(a, b);
    std::printf("ssim %.3f\n", r.ssim);
    std::printf("histogram_preserved");
    for (bool p : r.histogram_preserved) std::printf(" %s", p ? "yes" : "no");
    std::printf("\nmean_abs_diff %.3f\n", r.mean_abs_diff);
    return kOk;
}

bool report_line(const std::string& name, double value, const char* relation, double bound) {
    const bool pass = std::string(relation) == "<=" ? value <= bound : value > bound;
    std::printf("%-44s dev %.3e  (%s %.0e)  %s\n", name.c_str(), value, relation, bound, pass ? "PASS" : "FAIL");
    return pass;
}

int cmd_check_vit(const VitCheckConfig& cfg) {
    const ToyVitConfig& mc = cfg.model;
    const ToyVit model = init_toy_vit(cfg.seed, mc);
    SplitMix64 rng(cfg.seed ^ 0x5EEDF00DULL);

    auto random_patches = [&] {
        PatchSequence p(mc.patches, mc.patch_dim());
        for (double& v : p.values) v = rng.next_unit();
        return p;
    };

    double p1_none = 0, p1_co = 0, p2_embed = 0, p2_forward = 0;
    // Controls must break on every trial, so track their smallest deviation.
    double p1_fixed_max = 0, p1_fixed_min = INFINITY, p2_wrong = INFINITY;
    // Keys need N == n patches: a (k*M) x M image carries k blocks.
    const std::size_t key_h = mc.patches * mc.block_size, key_w = mc.block_size;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const PatchSequence patches = random_patches();
        const Permutation perm = fisher_yates(mc.patches, rng);
        p1_none = std::max(p1_none, check_property1(model, patches, perm, PositionHandling::None));
        p1_co = std::max(p1_co, check_property1(model, patches, perm, PositionHandling::CoPermuted));
        const double fixed = check_property1(model, patches, perm, PositionHandling::Fixed);
        p1_fixed_max = std::max(p1_fixed_max, fixed);
        p1_fixed_min = std::min(p1_fixed_min, fixed);

        const EncryptionKey key = generate_key(rng.next(), mc.block_size, key_h, key_w);
        const EncryptionKey wrong = generate_key(rng.next(), mc.block_size, key_h, key_w);
        const Property2Result r = check_property2(model, patches, key);
        p2_embed = std::max(p2_embed, r.embedding_deviation);
        p2_forward = std::max(p2_forward, r.forward_deviation);
        if (mc.block_size > 2) {
            p2_wrong = std::min(p2_wrong, check_property2(model, patches, key, wrong).forward_deviation);
        }
    }

    std::printf("toy encoder: d=%zu heads=%zu layers=%zu patches=%zu patch=%zux%zux%zu seed=%llu trials=%zu\n",
                mc.dim, mc.heads, mc.layers, mc.patches, mc.block_size, mc.block_size, mc.channels,
                static_cast<unsigned long long>(cfg.seed), cfg.trials);
    bool ok = true;
    if (cfg.break_position) {
        ok &= report_line("property 1 (fixed position embeddings)", p1_fixed_max, "<=", cfg.tol_property1);
    } else {
        ok &= report_line("property 1 (no position embeddings)", p1_none, "<=", cfg.tol_property1);
        ok &= report_line("property 1 (co-permuted position embeddings)", p1_co, "<=", cfg.tol_property1);
        ok &= report_line("control: fixed position embeddings break it", p1_fixed_min, ">", cfg.control_min);
    }
    ok &= report_line("property 2 (patch embedding)", p2_embed, "<=", cfg.tol_embedding);
    ok &= report_line("property 2 (encoder output)", p2_forward, "<=", cfg.tol_forward);
    if (mc.block_size > 2 && !cfg.break_position) {
        // M = 2 has a single-pixel sub-block, so every key is the same key.
        ok &= report_line("control: embedding adapted to a wrong key", p2_wrong, ">", cfg.control_min);
    }
    return ok ? kOk : kCheckFailed;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vitcrypt: block-scramble + sub-block pixel-shuffle image encryption for ViT pipelines"};
    app.require_subcommand(1);

    RunConfig cfg;
    VitCheckConfig vit;

    auto* keygen = app.add_subcommand("keygen", "Generate a key file from a 64-bit seed");
    keygen->add_option("--seed", cfg.seed, "Key seed")->required();
    keygen->add_option("-M,--block", cfg.block_size, "Block side in pixels (even)")->capture_default_str();
    keygen->add_option("-H,--height", cfg.height, "Image height")->capture_default_str();
    keygen->add_option("-W,--width", cfg.width, "Image width")->capture_default_str();
    keygen->add_option("-o,--out", cfg.output, "Key file to write")->required();

    auto* enc = app.add_subcommand("encrypt", "Encrypt a PPM/PGM image");
    auto* dec = app.add_subcommand("decrypt", "Decrypt a PPM/PGM image");
    for (auto* sub : {enc, dec}) {
        sub->add_option("key", cfg.key_path, "Key file")->required();
        sub->add_option("input", cfg.input, "Input image (PPM/PGM)")->required();
        sub->add_option("output", cfg.output, "Output image (PPM/PGM)")->required();
    }

    auto* ks = app.add_subcommand("keyspace", "Print the exact key-space size for a geometry");
    ks->add_option("M", cfg.block_size, "Block side")->required();
    ks->add_option("H", cfg.height, "Image height")->required();
    ks->add_option("W", cfg.width, "Image width")->required();
    auto* bits_flag = ks->add_flag("--bits", cfg.bits, "Print log2 of the key space rounded to the nearest integer");
    ks->add_flag("--floor-bits", cfg.floor_bits, "Print floor(log2) of the key space")->excludes(bits_flag);

    auto* cifar = app.add_subcommand("cifar-export", "Write CIFAR-10 batch records as <index>_<label>.ppm");
    cifar->add_option("batch", cfg.input, "CIFAR-10 binary batch file")->required();
    cifar->add_option("outdir", cfg.output, "Output directory")->required();
    cifar->add_option("--resize", cfg.resize, "Nearest-neighbour upscale factor (7 gives 224x224)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cifar->add_option("--encrypt", cfg.key_path, "Encrypt every exported image with this key");
    cifar->add_option("--limit", cfg.limit, "Export only the first N records (0 = all)");

    auto* ss = app.add_subcommand("ssim", "Luma SSIM between two images (3 decimals)");
    ss->add_option("a", cfg.input, "First image")->required();
    ss->add_option("b", cfg.input2, "Second image")->required();
    ss->add_flag("--report", cfg.report, "Also print histogram preservation and mean |difference|");

    auto* cv = app.add_subcommand("check-vit", "Numerically check patch-order equivariance and embedding absorption");
    cv->add_option("--seed", vit.seed, "Model and data seed")->capture_default_str();
    cv->add_option("--block", vit.model.block_size, "Patch side M (even)")->capture_default_str();
    cv->add_option("--channels", vit.model.channels, "Channels (1 or 3)")->check(CLI::IsMember({1, 3}))
        ->capture_default_str();
    cv->add_option("--dim", vit.model.dim, "Model dim d")->capture_default_str();
    cv->add_option("--heads", vit.model.heads, "Attention heads")->capture_default_str();
    cv->add_option("--layers", vit.model.layers, "Encoder layers")->capture_default_str();
    cv->add_option("--patches", vit.model.patches, "Patch count n")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cv->add_option("--trials", vit.trials, "Random permutations / keys")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cv->add_option("--tol1", vit.tol_property1, "Property 1 tolerance")->capture_default_str();
    cv->add_option("--tol-embed", vit.tol_embedding, "Property 2 embedding tolerance")->capture_default_str();
    cv->add_option("--tol-forward", vit.tol_forward, "Property 2 encoder-output tolerance")->capture_default_str();
    cv->add_option("--control-min", vit.control_min, "Minimum deviation for control runs")->capture_default_str();
    cv->add_flag("--break-pos-emb", vit.break_position,
                 "Check property 1 with unpermuted position embeddings (expected to FAIL)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    return guarded([&]() -> int {
        if (*keygen) return cmd_keygen(cfg);
        if (*enc) return cmd_crypt(cfg, true);
        if (*dec) return cmd_crypt(cfg, false);
        if (*ks) return cmd_keyspace(cfg);
        if (*cifar) return cmd_cifar_export(cfg);
        if (*ss) return cmd_ssim(cfg);
        if (*cv) {
            if (vit.model.block_size < 2 || vit.model.block_size % 2 != 0) {
                throw ConfigError("--block must be even and at least 2");
            }
            return cmd_check_vit(vit);
        }
        return kUsage;
    });
}
