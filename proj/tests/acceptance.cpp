// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.
//
//   acceptance [--criteria 1,2,...] [--cifar test_batch.bin] [--proxy batch.bin]
//
// Criterion 3 runs on the CIFAR-10 test batch given with --cifar; when that
// file is absent the criterion is reported as SKIPPED and the process exits
// with 77. --proxy runs the same procedure on another CIFAR-format batch; it
// is not CIFAR-10, so only the histogram invariant gates that run and the
// SSIM statistics are printed with an INFO label.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
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

constexpr int kSkipped = 77;

// Tolerances and thresholds.
constexpr std::size_t kExpectedBits = 1511;
constexpr double kCriterion1Seconds = 1.0;
constexpr std::size_t kRoundTripImages = 200;
constexpr std::size_t kRoundTripSeeds = 100;
constexpr double kCriterion2Seconds = 30.0;
constexpr std::size_t kLeakageImages = 200;
constexpr double kLeakageSsimBound = 0.35;
constexpr double kLeakageFraction = 0.95;
constexpr double kCriterion3Seconds = 120.0;
constexpr std::size_t kVitTrials = 20;
constexpr double kProperty1Tol = 1e-5;
constexpr double kEmbeddingTol = 1e-6;
constexpr double kForwardTol = 1e-5;
constexpr double kControlMin = 1e-2;
constexpr double kVitSeconds = 10.0;

struct Outcome {
    bool pass = false;
    std::string detail;
    const char* label = nullptr;  // overrides PASS/FAIL in the printed line
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct Command {
    int code;
    std::string out;
};

Command run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / ("vitcrypt_acc_" + std::to_string(std::random_device{}()));
    const std::string cmd = std::string(VITCRYPT_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    const auto bytes = read_file(out);
    fs::remove(out);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::string(bytes.begin(), bytes.end())};
}

bool divisible_by_factorial(BigUint value, std::uint32_t n) {
    for (std::uint32_t k = n; k >= 2; --k) {
        auto [q, r] = value.divmod(k);
        if (r != 0) return false;
        value = std::move(q);
    }
    return true;
}

Image random_image(std::size_t h, std::size_t w, std::size_t c, std::mt19937_64& rng) {
    std::vector<std::uint8_t> data(h * w * c);
    for (auto& v : data) v = static_cast<std::uint8_t>(rng());
    return Image(h, w, c, std::move(data));
}

Outcome criterion1() {
    const auto start = Clock::now();
    const Command cmd = run_cli("keyspace 16 224 224 --bits");
    const double elapsed = seconds_since(start);
    const BigUint k = keyspace(16, 224, 224);
    const bool exact = k == factorial_big(196) * factorial_big(64) && divisible_by_factorial(k, 196) &&
                       divisible_by_factorial(k, 64);
    const bool pass = cmd.code == 0 && cmd.out == std::to_string(kExpectedBits) + "\n" && exact &&
                      elapsed < kCriterion1Seconds;
    return {pass, fmt("`keyspace 16 224 224 --bits` -> %s (expected %zu), exact 196!*64! divisibility %s, %.3fs",
                      cmd.out.substr(0, cmd.out.find('\n')).c_str(), kExpectedBits, exact ? "ok" : "BROKEN", elapsed)};
}

Outcome criterion2() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::vector<Image> images;
    for (std::size_t i = 0; i < kRoundTripImages / 2; ++i) images.push_back(resize_nearest(random_image(32, 32, 3, rng), 7));
    for (std::size_t i = 0; i < kRoundTripImages / 2; ++i) images.push_back(random_image(64, 64, 1, rng));

    std::size_t checked = 0, failures = 0;
    for (std::size_t s = 0; s < kRoundTripSeeds; ++s) {
        const std::uint64_t seed = rng();
        const CipherPlan big(generate_key(seed, 16, 224, 224));
        const CipherPlan small(generate_key(seed, 16, 64, 64));
        for (const Image& img : images) {
            const CipherPlan& plan = img.height() == 224 ? big : small;
            failures += plan.decrypt(plan.encrypt(img)) != img;
            ++checked;
        }
    }
    // The step-by-step route must agree with the compiled plan too.
    for (std::size_t i = 0; i < images.size(); i += 10) {
        const Image& img = images[i];
        const EncryptionKey key = generate_key(i, 16, img.height(), img.width());
        failures += decrypt_stepwise(encrypt_stepwise(img, key), key) != img;
        failures += encrypt_stepwise(img, key) != encrypt(img, key);
    }
    const double elapsed = seconds_since(start);
    return {failures == 0 && elapsed < kCriterion2Seconds,
            fmt("%zu round trips (%zu images x %zu seeds), %zu mismatches, %.2fs", checked, images.size(),
                kRoundTripSeeds, failures, elapsed)};
}

// On the real test batch both halves of the criterion gate the result. On a
// proxy batch only the exact histogram invariant gates; the SSIM fraction is
// reported for information because the threshold is defined for CIFAR-10.
Outcome leakage(const fs::path& batch_path, bool proxy) {
    const auto start = Clock::now();
    const auto records = load_cifar10_batch(read_file(batch_path));
    if (records.size() < kLeakageImages) {
        return {false, fmt("batch holds %zu records, need %zu", records.size(), kLeakageImages)};
    }
    std::size_t preserved = 0, below = 0;
    double worst = 0.0, total = 0.0;
    for (std::size_t i = 0; i < kLeakageImages; ++i) {
        const Image plain = resize_nearest(records[i].image, 7);
        const Image enc = encrypt(plain, generate_key(i, 16, 224, 224));
        const LeakageReport r = leakage_report(plain, enc);
        preserved += r.all_histograms_preserved();
        below += r.ssim < kLeakageSsimBound;
        worst = std::max(worst, r.ssim);
        total += r.ssim;
    }
    const double elapsed = seconds_since(start);
    const double fraction = static_cast<double>(below) / kLeakageImages;
    const bool histograms_ok = preserved == kLeakageImages;
    const bool pass = histograms_ok && (proxy || (fraction >= kLeakageFraction && elapsed < kCriterion3Seconds));
    const char* label = proxy ? (histograms_ok ? "INFO" : "FAIL") : nullptr;
    return {pass, fmt("%zu images: histograms preserved %zu/%zu, SSIM < %.2f for %.1f%% (need %.0f%%), "
                      "mean SSIM %.3f, max %.3f, %.1fs",
                      kLeakageImages, preserved, kLeakageImages, kLeakageSsimBound, 100 * fraction,
                      100 * kLeakageFraction, total / kLeakageImages, worst, elapsed),
            label};
}

PatchSequence random_patches(const ToyVitConfig& cfg, SplitMix64& rng) {
    PatchSequence p(cfg.patches, cfg.patch_dim());
    for (double& v : p.values) v = rng.next_unit();
    return p;
}

ToyVitConfig acceptance_model() {
    ToyVitConfig cfg;
    cfg.dim = 64;
    cfg.heads = 4;
    cfg.layers = 2;
    cfg.patches = 16;
    cfg.block_size = 8;
    cfg.channels = 3;
    return cfg;
}

Outcome criterion4() {
    const auto start = Clock::now();
    const ToyVitConfig cfg = acceptance_model();
    const ToyVit model = init_toy_vit(4, cfg);
    SplitMix64 rng(44);
    double none = 0, co = 0, control = INFINITY;
    for (std::size_t t = 0; t < kVitTrials; ++t) {
        const PatchSequence patches = random_patches(cfg, rng);
        const Permutation perm = fisher_yates(cfg.patches, rng);
        none = std::max(none, check_property1(model, patches, perm, PositionHandling::None));
        co = std::max(co, check_property1(model, patches, perm, PositionHandling::CoPermuted));
        control = std::min(control, check_property1(model, patches, perm, PositionHandling::Fixed));
    }
    const double elapsed = seconds_since(start);
    const bool pass = none <= kProperty1Tol && co <= kProperty1Tol && control > kControlMin && elapsed < kVitSeconds;
    return {pass, fmt("%zu perms: no-pos %.2e, co-permuted %.2e (<= %.0e); fixed-pos control min %.2e (> %.0e); %.2fs",
                      kVitTrials, none, co, kProperty1Tol, control, kControlMin, elapsed)};
}

Outcome criterion5() {
    const auto start = Clock::now();
    const ToyVitConfig cfg = acceptance_model();
    const ToyVit model = init_toy_vit(5, cfg);
    SplitMix64 rng(55);
    double embed = 0, forward = 0, control = INFINITY, image_level = 0;
    for (std::size_t t = 0; t < kVitTrials; ++t) {
        const PatchSequence patches = random_patches(cfg, rng);
        const EncryptionKey key = generate_key(rng.next(), cfg.block_size, 32, 32);
        const EncryptionKey wrong = generate_key(rng.next(), cfg.block_size, 32, 32);
        const Property2Result r = check_property2(model, patches, key);
        embed = std::max(embed, r.embedding_deviation);
        forward = std::max(forward, r.forward_deviation);
        control = std::min(control, check_property2(model, patches, key, wrong).forward_deviation);

        std::mt19937_64 pixels(rng.next());
        image_level = std::max(image_level, check_encrypted_image(model, random_image(32, 32, 3, pixels), key));
    }
    const double elapsed = seconds_since(start);
    const bool pass = embed <= kEmbeddingTol && forward <= kForwardTol && control > kControlMin &&
                      image_level <= kForwardTol && elapsed < kVitSeconds;
    return {pass, fmt("%zu keys: embedding %.2e (<= %.0e), forward %.2e (<= %.0e), full-cipher %.2e; wrong-key "
                      "control min %.2e (> %.0e); %.2fs",
                      kVitTrials, embed, kEmbeddingTol, forward, kForwardTol, image_level, control, kControlMin,
                      elapsed)};
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (auto b : bytes) h = (h ^ b) * 0x100000001B3ULL;
    return h;
}

Outcome criterion6() {
    const fs::path dir = fs::temp_directory_path() / ("vitcrypt_det_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const auto p = [&](const char* name) { return (dir / name).string(); };

    std::mt19937_64 rng(6);
    save_image_file(dir / "in.ppm", resize_nearest(random_image(32, 32, 3, rng), 7));
    bool ok = true;
    ok &= run_cli("keygen --seed 42 -M 16 -H 224 -W 224 -o " + p("k1.txt")).code == 0;
    ok &= run_cli("keygen --seed 42 -M 16 -H 224 -W 224 -o " + p("k2.txt")).code == 0;
    ok &= run_cli("encrypt " + p("k1.txt") + " " + p("in.ppm") + " " + p("c1.ppm")).code == 0;
    ok &= run_cli("encrypt " + p("k2.txt") + " " + p("in.ppm") + " " + p("c2.ppm")).code == 0;
    bool same_key = false, same_cipher = false, golden = false;
    if (ok) {
        const auto k1 = read_file(dir / "k1.txt");
        same_key = k1 == read_file(dir / "k2.txt");
        same_cipher = read_file(dir / "c1.ppm") == read_file(dir / "c2.ppm");
        // Hash of the seed-42 key file from the independent Python reference
        // (tests/oracles/keys_oracle.py): pins the output across platforms.
        golden = k1.size() == 894 && fnv1a(k1) == 0xF6918200D081F014ULL;
    }
    fs::remove_all(dir);
    return {ok && same_key && same_cipher && golden,
            fmt("key files identical: %s, ciphertexts identical: %s, key file matches reference hash: %s",
                same_key ? "yes" : "no", same_cipher ? "yes" : "no", golden ? "yes" : "no")};
}

Outcome criterion7() {
    // Accuracy figures need ViT-B/16 fine-tuning and are out of scope; the
    // repository must say so and provide the export pipeline for external training.
    const auto readme = read_file(fs::path(VITCRYPT_SOURCE_DIR) / "README.md");
    const std::string text(readme.begin(), readme.end());
    const bool documented = text.find("## Out of scope: classification accuracy") != std::string::npos;

    const fs::path dir = fs::temp_directory_path() / ("vitcrypt_exp_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    std::mt19937_64 rng(7);
    std::vector<std::uint8_t> batch;
    for (std::uint8_t label = 0; label < 10; ++label) {
        batch.push_back(label);
        for (std::size_t i = 1; i < kCifarRecordBytes; ++i) batch.push_back(static_cast<std::uint8_t>(rng()));
    }
    write_file(dir / "batch.bin", batch);
    bool exported = run_cli("keygen --seed 1 -M 16 -H 224 -W 224 -o " + (dir / "k.txt").string()).code == 0 &&
                    run_cli("cifar-export " + (dir / "batch.bin").string() + " " + (dir / "out").string() +
                            " --resize 7 --encrypt " + (dir / "k.txt").string())
                            .code == 0;
    const auto records = load_cifar10_batch(batch);
    for (std::size_t i = 0; exported && i < records.size(); ++i) {
        const fs::path file = dir / "out" / (std::to_string(i) + "_" + std::to_string(records[i].label) + ".ppm");
        exported = fs::exists(file) && load_image_file(file) == encrypt(resize_nearest(records[i].image, 7),
                                                                         generate_key(1, 16, 224, 224));
    }
    fs::remove_all(dir);
    return {documented && exported, fmt("README documents the out-of-scope accuracy claims: %s; encrypted 224x224 "
                                        "export pipeline produces <index>_<label>.ppm: %s",
                                        documented ? "yes" : "no", exported ? "yes" : "no")};
}

std::set<int> parse_criteria(const std::string& list) {
    std::set<int> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> criteria{1, 2, 3, 4, 5, 6, 7};
    std::string cifar_path;
    std::string proxy_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const bool has_value = i + 1 < argc;
        if (arg == "--criteria" && has_value) {
            criteria = parse_criteria(argv[++i]);
        } else if (arg == "--cifar" && has_value) {
            cifar_path = argv[++i];
        } else if (arg == "--proxy" && has_value) {
            proxy_path = argv[++i];
        } else if (arg == "--cifar" || arg == "--proxy") {
            // Empty CMake cache value: treated as not provided.
        } else {
            std::fprintf(stderr, "usage: acceptance [--criteria 1,2,...] [--cifar FILE] [--proxy FILE]\n");
            return 2;
        }
    }

    bool all_pass = true;
    bool skipped = false;
    const auto report = [&](const std::string& name, const std::function<Outcome()>& body) {
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%-46s %s  %s\n", name.c_str(), o.label ? o.label : (o.pass ? "PASS" : "FAIL"),
                    o.detail.c_str());
        std::fflush(stdout);
        all_pass &= o.pass;
    };

    if (criteria.count(1)) report("criterion 1 key-space reproduction", criterion1);
    if (criteria.count(2)) report("criterion 2 round-trip identity", criterion2);
    if (criteria.count(3)) {
        if (!proxy_path.empty()) {
            report("criterion 3 leakage (natural-image proxy)", [&] { return leakage(proxy_path, true); });
        } else if (!cifar_path.empty() && fs::exists(cifar_path)) {
            report("criterion 3 leakage (CIFAR-10 test batch)", [&] { return leakage(cifar_path, false); });
        } else {
            std::printf("%-46s SKIPPED  CIFAR-10 test batch not available (configure with "
                        "-DVITCRYPT_CIFAR10_TEST_BATCH=/path/to/test_batch.bin)\n",
                        "criterion 3 leakage (CIFAR-10 test batch)");
            skipped = true;
        }
    }
    if (criteria.count(4)) report("criterion 4 property 1 (patch-order)", criterion4);
    if (criteria.count(5)) report("criterion 5 property 2 (embedding absorbs)", criterion5);
    if (criteria.count(6)) report("criterion 6 determinism", criterion6);
    if (criteria.count(7)) report("criterion 7 out-of-scope claims documented", criterion7);

    if (!all_pass) return 1;
    return skipped ? kSkipped : 0;
}
