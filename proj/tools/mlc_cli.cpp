// mlc: command-line front end for the multichannel lossless codec.
//
// Exit codes: 0 success, 1 data/processing error, 2 usage error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mlc/mlc.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct AudioDeleter {
    void operator()(mlc_audio *a) const { mlc_audio_free(a); }
};
struct StreamDeleter {
    void operator()(mlc_stream *s) const { mlc_stream_free(s); }
};
struct DecodedDeleter {
    void operator()(mlc_decoded *d) const { mlc_decoded_free(d); }
};
using Audio = std::unique_ptr<mlc_audio, AudioDeleter>;
using Stream = std::unique_ptr<mlc_stream, StreamDeleter>;
using Decoded = std::unique_ptr<mlc_decoded, DecodedDeleter>;

struct Failure {
    int code;
    std::string message;
};

void check(mlc_status status, const std::string &context) {
    if (status != MLC_OK) {
        std::string msg = context + ": " + mlc_status_string(status);
        if (*mlc_last_error())
            msg += " (" + std::string(mlc_last_error()) + ")";
        throw Failure{kExitData, msg};
    }
}

[[noreturn]] void usage_error(const std::string &msg) { throw Failure{kExitUsage, msg}; }

Audio read_wav(const std::string &path) {
    mlc_audio *a = nullptr;
    check(mlc_wav_read(path.c_str(), &a), "reading " + path);
    return Audio(a);
}

Stream read_stream(const std::string &path) {
    mlc_stream *s = nullptr;
    check(mlc_stream_read_file(path.c_str(), &s), "reading " + path);
    return Stream(s);
}

Decoded decode(const mlc_stream *stream) {
    mlc_decoded *d = nullptr;
    const mlc_status st = mlc_decode(stream, &d);
    if (st != MLC_OK) {
        std::string msg = std::string("decode failed: ") + mlc_last_error();
        throw Failure{kExitData, msg};
    }
    return Decoded(d);
}

const char *layout_label(uint32_t channels) {
    switch (channels) {
    case 1: return "mono";
    case 2: return "2.0";
    case 5: return "5.0";
    default: return "?";
    }
}

std::string coding_label(const mlc_mix_coding &c) {
    static const char *names[] = {"sep", "joint", "sep-dmx", "joint-dmx"};
    std::string s = names[c.kind];
    if (c.svd)
        s += "+svd";
    return s;
}

// ---------------------------------------------------------------- encode

struct EncodeArgs {
    std::string input;
    std::string output;
    std::string model = "sep";
    bool svd = false;
    std::optional<uint32_t> order;
    std::optional<double> delta;
    uint32_t frame = 4096;
    std::optional<std::string> hierarchical;
};

int run_encode(const EncodeArgs &args) {
    mlc_model_kind kind;
    if (mlc_parse_model(args.model.c_str(), &kind) != MLC_OK)
        usage_error("unknown model '" + args.model + "'");
    const bool needs_downmix = kind == MLC_MODEL_SEP_DMX || kind == MLC_MODEL_JOINT_DMX;
    if (needs_downmix && !args.hierarchical)
        usage_error("model " + args.model + " predicts from a downmix; pass --hierarchical itu|<file>");

    Audio input = read_wav(args.input);
    Audio downmix;
    if (args.hierarchical) {
        mlc_audio *d = nullptr;
        if (*args.hierarchical == "itu")
            check(mlc_itu_downmix(input.get(), &d), "ITU downmix");
        else
            check(mlc_wav_read(args.hierarchical->c_str(), &d), "reading " + *args.hierarchical);
        downmix.reset(d);
    }

    std::vector<const mlc_audio *> mixes;
    std::vector<mlc_mix_coding> codings;
    if (downmix) {
        mixes.push_back(downmix.get());
        codings.push_back(mlc_mix_coding_default(MLC_MODEL_SEP, 0));
        if (args.order)
            codings.back().order = *args.order;
    }
    mlc_mix_coding coding = mlc_mix_coding_default(kind, needs_downmix ? mlc_audio_channels(downmix.get()) : 0);
    if (args.order)
        coding.order = *args.order;
    if (args.delta)
        coding.delta = *args.delta;
    coding.svd = args.svd ? 1 : 0;
    mixes.push_back(input.get());
    codings.push_back(coding);

    mlc_stream *s = nullptr;
    check(mlc_encode(mixes.data(), codings.data(), mixes.size(), args.frame, &s), "encode");
    Stream stream(s);
    check(mlc_stream_write_file(stream.get(), args.output.c_str()), "writing " + args.output);

    uint64_t raw_bits = 0;
    for (std::size_t i = 0; i < mixes.size(); ++i) {
        uint64_t bits = 0;
        check(mlc_stream_mix_bits(stream.get(), i, &bits), "accounting");
        raw_bits += 16ull * mlc_audio_channels(mixes[i]) * mlc_audio_length(mixes[i]);
        double ratio = 0.0;
        if (mlc_compression_ratio(bits, mixes[i], &ratio) == MLC_OK)
            std::printf("mix %zu  %-4s %-14s %10llu bits  ratio %.4f\n", i, layout_label(mlc_audio_channels(mixes[i])),
                        coding_label(codings[i]).c_str(), static_cast<unsigned long long>(bits), ratio);
        else
            std::printf("mix %zu  %-4s %-14s %10llu bits  ratio n/a\n", i, layout_label(mlc_audio_channels(mixes[i])),
                        coding_label(codings[i]).c_str(), static_cast<unsigned long long>(bits));
    }
    const std::size_t bytes = mlc_stream_size(stream.get());
    if (raw_bits)
        std::printf("total  %zu bytes  ratio %.4f\n", bytes, 8.0 * static_cast<double>(bytes) / static_cast<double>(raw_bits));
    else
        std::printf("total  %zu bytes  ratio n/a\n", bytes);
    return kExitOk;
}

// ---------------------------------------------------------------- decode

std::vector<std::string> output_paths(const std::vector<std::string> &given, std::size_t mixes) {
    if (given.size() == mixes)
        return given;
    if (given.size() == 1) {
        const fs::path base(given.front());
        std::vector<std::string> out;
        for (std::size_t i = 0; i < mixes; ++i) {
            fs::path p = base;
            p.replace_filename(base.stem().string() + ".mix" + std::to_string(i) + base.extension().string());
            out.push_back(p.string());
        }
        return out;
    }
    usage_error("stream holds " + std::to_string(mixes) + " mixes but " + std::to_string(given.size()) +
                " output paths were given");
}

int run_decode(const std::string &input, const std::vector<std::string> &outputs) {
    Stream stream = read_stream(input);
    Decoded decoded = decode(stream.get());
    const std::size_t count = mlc_decoded_mix_count(decoded.get());
    const auto paths = output_paths(outputs, count);
    for (std::size_t i = 0; i < count; ++i) {
        const mlc_audio *mix = mlc_decoded_mix(decoded.get(), i);
        check(mlc_wav_write(paths[i].c_str(), mix), "writing " + paths[i]);
        std::printf("mix %zu  %-4s %llu samples -> %s\n", i, layout_label(mlc_audio_channels(mix)),
                    static_cast<unsigned long long>(mlc_audio_length(mix)), paths[i].c_str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int run_verify(const std::vector<std::string> &files) {
    if (files.size() < 2)
        usage_error("verify needs at least one original WAV followed by the stream");
    const std::string &stream_path = files.back();
    const std::vector<std::string> originals(files.begin(), files.end() - 1);

    Stream stream = read_stream(stream_path);
    Decoded decoded = decode(stream.get());
    const std::size_t count = mlc_decoded_mix_count(decoded.get());
    if (originals.size() > count) {
        std::printf("stream holds %zu mixes, %zu originals given\n", count, originals.size());
        return kExitData;
    }

    bool identical = true;
    const std::size_t first = count - originals.size();
    for (std::size_t i = 0; i < originals.size(); ++i) {
        Audio original = read_wav(originals[i]);
        const mlc_audio *mix = mlc_decoded_mix(decoded.get(), first + i);
        uint32_t channel = 0;
        uint64_t sample = 0;
        if (mlc_audio_equal(original.get(), mix, &channel, &sample)) {
            std::printf("mix %zu  %s: identical\n", first + i, originals[i].c_str());
            continue;
        }
        identical = false;
        if (mlc_audio_channels(original.get()) != mlc_audio_channels(mix) ||
            mlc_audio_length(original.get()) != mlc_audio_length(mix))
            std::printf("mix %zu  %s: shape differs (%u x %llu vs %u x %llu)\n", first + i, originals[i].c_str(),
                        mlc_audio_channels(original.get()),
                        static_cast<unsigned long long>(mlc_audio_length(original.get())), mlc_audio_channels(mix),
                        static_cast<unsigned long long>(mlc_audio_length(mix)));
        else
            std::printf("mix %zu  %s: first mismatch at channel %u, sample %llu\n", first + i, originals[i].c_str(),
                        channel, static_cast<unsigned long long>(sample));
    }
    return identical ? kExitOk : kExitData;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string corpus;
    uint32_t frame = 4096;
    uint32_t order = 8;
    std::optional<double> delta;
    unsigned threads = 0;
    bool tsv_only = false;
};

int run_bench(const BenchArgs &args) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto &entry : fs::directory_iterator(args.corpus, ec)) {
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (entry.is_regular_file() && ext == ".wav")
            files.push_back(entry.path());
    }
    if (ec)
        throw Failure{kExitData, "cannot list " + args.corpus + ": " + ec.message()};
    if (files.empty())
        throw Failure{kExitData, "corpus " + args.corpus + " holds no WAV files"};
    std::sort(files.begin(), files.end());

    const std::size_t configs = mlc_measure_config_count();
    std::vector<std::vector<mlc_ratio_row>> results(files.size(), std::vector<mlc_ratio_row>(configs));
    std::vector<uint64_t> lengths(files.size(), 0);
    std::vector<std::string> errors(files.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < files.size();) {
            mlc_audio *a = nullptr;
            if (mlc_wav_read(files[i].string().c_str(), &a) != MLC_OK) {
                errors[i] = mlc_last_error();
                continue;
            }
            Audio audio(a);
            lengths[i] = mlc_audio_length(audio.get());
            if (mlc_measure(audio.get(), args.frame, args.order, args.delta.value_or(-1.0), results[i].data()) != MLC_OK)
                errors[i] = mlc_last_error();
        }
    };
    unsigned threads = args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, files.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();

    for (std::size_t i = 0; i < files.size(); ++i)
        if (!errors[i].empty())
            throw Failure{kExitData, files[i].string() + ": " + errors[i]};

    // Unweighted mean of the per-file ratios.
    std::vector<double> upmix(configs, 0.0), total(configs, 0.0);
    uint64_t samples = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        samples += lengths[i];
        for (std::size_t k = 0; k < configs; ++k) {
            upmix[k] += results[i][k].upmix_ratio / static_cast<double>(files.size());
            total[k] += results[i][k].total_ratio / static_cast<double>(files.size());
        }
    }

    if (!args.tsv_only) {
        std::printf("corpus: %zu files, %llu samples per channel\n", files.size(), static_cast<unsigned long long>(samples));
        std::printf("frame %u, order %u\n\n", args.frame, args.order);
        std::printf("%-16s %8s %8s\n", "configuration", "total", "upmix");
        for (std::size_t k = 0; k < configs; ++k)
            std::printf("%-16s %8.4f %8.4f\n", results[0][k].name, total[k], upmix[k]);
        std::printf("\n");
    }
    for (std::size_t k = 0; k < configs; ++k)
        std::printf("%s\t%.6f\t%.6f\n", results[0][k].name, upmix[k], total[k]);
    return kExitOk;
}

// ---------------------------------------------------------------- gen-corpus

int run_gen_corpus(const std::string &dir, uint64_t seed, uint32_t count, double seconds, uint32_t rate) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Failure{kExitData, "cannot create " + dir + ": " + ec.message()};
    for (uint32_t i = 0; i < count; ++i) {
        mlc_audio *a = nullptr;
        check(mlc_generate_corpus_item(seed, i, seconds, rate, &a), "generating item " + std::to_string(i));
        Audio audio(a);
        char name[32];
        std::snprintf(name, sizeof name, "item_%03u.wav", i);
        const std::string path = (fs::path(dir) / name).string();
        check(mlc_wav_write(path.c_str(), audio.get()), "writing " + path);
    }
    std::printf("wrote %u items to %s\n", count, dir.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------- info

int run_info(const std::string &path) {
    Stream stream = read_stream(path);
    Decoded decoded = decode(stream.get());
    size_t count = 0;
    check(mlc_inspect(stream.get(), nullptr, 0, &count), "inspect");
    std::vector<mlc_chunk_info> chunks(count);
    check(mlc_inspect(stream.get(), chunks.data(), chunks.size(), &count), "inspect");

    const std::size_t mixes = mlc_decoded_mix_count(decoded.get());
    std::printf("%zu bytes, frame size %u, %zu mixes\n", mlc_stream_size(stream.get()),
                mlc_decoded_frame_size(decoded.get()), mixes);
    for (std::size_t m = 0; m < mixes; ++m) {
        mlc_mix_coding coding{};
        check(mlc_decoded_coding(decoded.get(), m, &coding), "header");
        const mlc_audio *mix = mlc_decoded_mix(decoded.get(), m);
        uint64_t side = 0, payload = 0, warmup = 0, other = 0, svd_frames = 0, escapes = 0, frames = 0;
        for (const auto &c : chunks) {
            if (c.mix != m)
                continue;
            ++frames;
            side += c.flag_bits + c.coefficient_bits + c.projection_bits + c.rice_param_bits;
            payload += c.payload_bits;
            warmup += c.warmup_bits;
            other += c.padding_bits + 32;
            svd_frames += c.svd_mode ? 1 : 0;
            escapes += c.escaped_channels;
        }
        std::printf("mix %zu  %-4s %-14s order %u  delta %g  %llu samples\n", m, layout_label(mlc_audio_channels(mix)),
                    coding_label(coding).c_str(), coding.order, coding.delta,
                    static_cast<unsigned long long>(mlc_audio_length(mix)));
        std::printf("        frames %llu (projection %llu), verbatim channel-frames %llu\n",
                    static_cast<unsigned long long>(frames), static_cast<unsigned long long>(svd_frames),
                    static_cast<unsigned long long>(escapes));
        std::printf("        side info %llu bits, warm-up %llu, payload %llu, framing %llu\n",
                    static_cast<unsigned long long>(side), static_cast<unsigned long long>(warmup),
                    static_cast<unsigned long long>(payload), static_cast<unsigned long long>(other));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multichannel lossless audio codec"};
    app.require_subcommand(1);

    EncodeArgs enc;
    auto *encode_cmd = app.add_subcommand("encode", "Encode a WAV file (optionally with its downmix)");
    encode_cmd->add_option("input", enc.input, "Input WAV (mono, 2.0, 5.0 or 5.1)")->required();
    encode_cmd->add_option("output", enc.output, "Output stream")->required();
    encode_cmd->add_option("--model", enc.model, "sep | joint | sep-dmx | joint-dmx")->capture_default_str();
    encode_cmd->add_flag("--svd", enc.svd, "Try the residual projection per frame");
    encode_cmd->add_option("--order", enc.order, "Prediction order (default 8)")->check(CLI::Range(1, 32));
    encode_cmd->add_option("--delta", enc.delta, "Regularization weight (default 1e-4, 0 for sep)")
        ->check(CLI::NonNegativeNumber);
    encode_cmd->add_option("--frame", enc.frame, "Frame size in samples")->capture_default_str()->check(CLI::PositiveNumber);
    encode_cmd->add_option("--hierarchical", enc.hierarchical,
                           "Store a downmix first: 'itu' (5.0 -> 2.0) or a WAV file");

    std::string dec_input;
    std::vector<std::string> dec_outputs;
    auto *decode_cmd = app.add_subcommand("decode", "Decode a stream to one WAV per mix");
    decode_cmd->add_option("stream", dec_input, "Input stream")->required();
    decode_cmd->add_option("outputs", dec_outputs, "Output WAV path(s)")->required();

    std::vector<std::string> verify_files;
    auto *verify_cmd = app.add_subcommand("verify", "Decode and compare against the original WAV(s)");
    verify_cmd->add_option("files", verify_files, "original.wav... stream")->required();

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "Ratio comparison over a directory of 5.0/5.1 WAVs");
    bench_cmd->add_option("corpus", bench.corpus, "Corpus directory")->required();
    bench_cmd->add_option("--frame", bench.frame, "Frame size")->capture_default_str()->check(CLI::PositiveNumber);
    bench_cmd->add_option("--order", bench.order, "Prediction order")->capture_default_str()->check(CLI::Range(1, 32));
    bench_cmd->add_option("--delta", bench.delta, "Regularization weight for the non-sep models")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = hardware)");
    bench_cmd->add_flag("--tsv", bench.tsv_only, "Only print name<TAB>upmix<TAB>total lines");

    std::string gen_dir;
    uint64_t gen_seed = 1;
    uint32_t gen_count = 20;
    double gen_seconds = 10.0;
    uint32_t gen_rate = 44100;
    auto *gen_cmd = app.add_subcommand("gen-corpus", "Write a deterministic synthetic 5.0 corpus");
    gen_cmd->add_option("dir", gen_dir, "Output directory")->required();
    gen_cmd->add_option("--seed", gen_seed, "Seed")->capture_default_str();
    gen_cmd->add_option("--count", gen_count, "Number of files")->capture_default_str();
    gen_cmd->add_option("--seconds", gen_seconds, "Length of each file")->capture_default_str()->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--rate", gen_rate, "Sample rate")->capture_default_str()->check(CLI::PositiveNumber);

    std::string info_path;
    auto *info_cmd = app.add_subcommand("info", "Show the layout and bit accounting of a stream");
    info_cmd->add_option("stream", info_path, "Stream")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*encode_cmd)
            return run_encode(enc);
        if (*decode_cmd)
            return run_decode(dec_input, dec_outputs);
        if (*verify_cmd)
            return run_verify(verify_files);
        if (*bench_cmd)
            return run_bench(bench);
        if (*gen_cmd)
            return run_gen_corpus(gen_dir, gen_seed, gen_count, gen_seconds, gen_rate);
        if (*info_cmd)
            return run_info(info_path);
    } catch (const Failure &f) {
        std::fprintf(stderr, "mlc: %s\n", f.message.c_str());
        return f.code;
    }
    return kExitUsage;
}
