/* C interface to the multichannel lossless codec.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return an mlc_status; on failure a
 * human-readable message for the calling thread is available from
 * mlc_last_error(). */
#ifndef MLC_MLC_H
#define MLC_MLC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MLC_BUILDING_LIBRARY)
#    define MLC_API __declspec(dllexport)
#  else
#    define MLC_API __declspec(dllimport)
#  endif
#else
#  define MLC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlc_status {
    MLC_OK = 0,
    MLC_ERR_INVALID_ARGUMENT = 1,
    MLC_ERR_LAYOUT = 2,
    MLC_ERR_UNDEFINED_RATIO = 3,
    MLC_ERR_NOT_APPLICABLE = 4,
    MLC_ERR_UNSUPPORTED = 5,
    MLC_ERR_MALFORMED = 6,
    MLC_ERR_IO = 7,
    MLC_ERR_STREAM = 8,
    MLC_ERR_EMPTY = 9,
    MLC_ERR_INTERNAL = 100
} mlc_status;

typedef enum mlc_model_kind {
    MLC_MODEL_SEP = 0,
    MLC_MODEL_JOINT = 1,
    MLC_MODEL_SEP_DMX = 2,
    MLC_MODEL_JOINT_DMX = 3
} mlc_model_kind;

typedef struct mlc_audio mlc_audio;
typedef struct mlc_stream mlc_stream;
typedef struct mlc_decoded mlc_decoded;

typedef struct mlc_mix_coding {
    mlc_model_kind kind;
    uint32_t order;            /* prediction order p */
    uint32_t downmix_channels; /* D; 0 unless kind uses the downmix */
    double delta;              /* regularization weight; 0 selects the plain solver */
    int svd;                   /* nonzero: try the projection mode per frame */
} mlc_mix_coding;

typedef struct mlc_ratio_row {
    char name[32];
    mlc_model_kind kind;
    int svd;
    double upmix_ratio;
    double total_ratio;
} mlc_ratio_row;

typedef struct mlc_chunk_info {
    uint32_t mix;
    uint64_t frame;
    uint32_t byte_length;
    int svd_mode;
    uint32_t escaped_channels;
    uint64_t flag_bits;
    uint64_t warmup_bits;
    uint64_t coefficient_bits;
    uint64_t projection_bits;
    uint64_t rice_param_bits;
    uint64_t payload_bits;
    uint64_t padding_bits;
} mlc_chunk_info;

MLC_API const char *mlc_version(void);
MLC_API const char *mlc_status_string(mlc_status status);
/* Message of the last failure on this thread; empty when none. */
MLC_API const char *mlc_last_error(void);
/* Frame index of the last stream error on this thread, or -1. */
MLC_API int64_t mlc_last_error_frame(void);

/* Audio blocks: planar 16-bit PCM. */
MLC_API mlc_status mlc_audio_create(uint32_t channels, uint64_t length, uint32_t sample_rate,
                                    const int16_t *planar, mlc_audio **out);
MLC_API void mlc_audio_free(mlc_audio *audio);
MLC_API uint32_t mlc_audio_channels(const mlc_audio *audio);
MLC_API uint64_t mlc_audio_length(const mlc_audio *audio);
MLC_API uint32_t mlc_audio_sample_rate(const mlc_audio *audio);
/* Borrowed pointer to `length` samples of one channel. */
MLC_API const int16_t *mlc_audio_channel(const mlc_audio *audio, uint32_t channel);
/* Returns 1 when both blocks hold identical samples. If they differ and the
 * shapes agree, the first mismatch is written to *channel / *sample. */
MLC_API int mlc_audio_equal(const mlc_audio *a, const mlc_audio *b, uint32_t *channel, uint64_t *sample);

MLC_API mlc_status mlc_wav_read(const char *path, mlc_audio **out);
MLC_API mlc_status mlc_wav_write(const char *path, const mlc_audio *audio);

MLC_API mlc_status mlc_itu_downmix(const mlc_audio *upmix, mlc_audio **out);
MLC_API mlc_status mlc_compression_ratio(uint64_t compressed_bits, const mlc_audio *original, double *out);

/* Defaults: order 8, delta 0 for SEP and 1e-4 otherwise, svd off. */
MLC_API mlc_mix_coding mlc_mix_coding_default(mlc_model_kind kind, uint32_t downmix_channels);
/* Accepts "sep", "joint", "sep-dmx", "joint-dmx". */
MLC_API mlc_status mlc_parse_model(const char *name, mlc_model_kind *out);

/* Encodes `count` mixes, lowest in the hierarchy first. */
MLC_API mlc_status mlc_encode(const mlc_audio *const *mixes, const mlc_mix_coding *codings, size_t count,
                              uint32_t frame_size, mlc_stream **out);
MLC_API mlc_status mlc_stream_from_bytes(const uint8_t *data, size_t size, mlc_stream **out);
MLC_API mlc_status mlc_stream_read_file(const char *path, mlc_stream **out);
MLC_API mlc_status mlc_stream_write_file(const mlc_stream *stream, const char *path);
MLC_API void mlc_stream_free(mlc_stream *stream);
MLC_API const uint8_t *mlc_stream_data(const mlc_stream *stream);
MLC_API size_t mlc_stream_size(const mlc_stream *stream);
/* Per-mix coded bits (chunks and their length prefixes); only known for
 * streams produced by mlc_encode. */
MLC_API mlc_status mlc_stream_mix_bits(const mlc_stream *stream, size_t mix, uint64_t *out);

MLC_API mlc_status mlc_decode(const mlc_stream *stream, mlc_decoded **out);
MLC_API void mlc_decoded_free(mlc_decoded *decoded);
MLC_API size_t mlc_decoded_mix_count(const mlc_decoded *decoded);
/* Borrowed; valid until mlc_decoded_free. */
MLC_API const mlc_audio *mlc_decoded_mix(const mlc_decoded *decoded, size_t index);
MLC_API mlc_status mlc_decoded_coding(const mlc_decoded *decoded, size_t index, mlc_mix_coding *out);
MLC_API uint32_t mlc_decoded_frame_size(const mlc_decoded *decoded);

/* Walks a stream and reports per-chunk bit accounting. With `chunks` NULL
 * only the count is returned. */
MLC_API mlc_status mlc_inspect(const mlc_stream *stream, mlc_chunk_info *chunks, size_t capacity, size_t *count);

/* Ratio comparison of a 5.0 block against its ITU downmix. `rows` must hold
 * mlc_measure_config_count() entries. delta < 0 keeps model defaults. */
MLC_API size_t mlc_measure_config_count(void);
MLC_API mlc_status mlc_measure(const mlc_audio *upmix, uint32_t frame_size, uint32_t order, double delta,
                               mlc_ratio_row *rows);

/* Deterministic synthetic 5.0 corpus item. */
MLC_API mlc_status mlc_generate_corpus_item(uint64_t seed, uint32_t index, double seconds, uint32_t sample_rate,
                                            mlc_audio **out);

#ifdef __cplusplus
}
#endif

#endif /* MLC_MLC_H */
