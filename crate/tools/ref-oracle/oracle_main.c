/*
 * Command-line driver for the ITU-T P.862 reference C sources, used only as a
 * differential test oracle. The ITU sources are not part of this repository;
 * build.sh fetches them.
 *
 * Usage: pesq_ref +8000|+16000 [+wb] ref.wav deg.wav
 *
 * WAV files are read the way the original reference main read them: the
 * first 44 bytes are skipped and the remainder is taken as native-endian
 * 16-bit samples. Multi-channel files are therefore consumed interleaved.
 *
 * Output (stdout), one key per line:
 *   raw <value %.9f>        (narrowband only)
 *   mos_lqo <value %.9f>
 *   crude_delay <samples>
 *   utterance <start> <end> <delay> <confidence>
 */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "pesqmain.h"
#include "pesqio.h"

static float *read_wav16(const char *path, long *n)
{
    FILE *f = fopen(path, "rb");
    long size, i;
    short *raw;
    float *out;
    if (f == NULL) { fprintf(stderr, "cannot open %s\n", path); exit(2); }
    fseek(f, 0, SEEK_END);
    size = ftell(f);
    fseek(f, 44, SEEK_SET);
    *n = (size - 44) / 2;
    raw = (short *) malloc(*n * sizeof(short));
    if (fread(raw, sizeof(short), *n, f) != (size_t) *n) { fprintf(stderr, "short read\n"); exit(2); }
    fclose(f);
    out = (float *) malloc(*n * sizeof(float));
    for (i = 0; i < *n; i++) out[i] = (float) raw[i];
    free(raw);
    return out;
}

int main(int argc, char **argv)
{
    SIGNAL_INFO ref_info, deg_info;
    ERROR_INFO err_info;
    long Error_Flag = 0;
    char *Error_Type = "Unknown error type.";
    long sample_rate = -1;
    int names = 0, arg;
    long ref_n, deg_n, u;
    const char *paths[2] = {NULL, NULL};

    memset(&ref_info, 0, sizeof ref_info);
    memset(&deg_info, 0, sizeof deg_info);
    memset(&err_info, 0, sizeof err_info);
    ref_info.input_filter = 1;
    deg_info.input_filter = 1;
    err_info.mode = NB_MODE;

    for (arg = 1; arg < argc; arg++) {
        if (strcmp(argv[arg], "+wb") == 0) {
            ref_info.input_filter = 2;
            deg_info.input_filter = 2;
            err_info.mode = WB_MODE;
        } else if (strcmp(argv[arg], "+16000") == 0) {
            sample_rate = 16000;
        } else if (strcmp(argv[arg], "+8000") == 0) {
            sample_rate = 8000;
        } else if (names < 2) {
            paths[names++] = argv[arg];
        } else {
            fprintf(stderr, "unexpected argument %s\n", argv[arg]);
            return 2;
        }
    }
    if (names != 2 || sample_rate < 0) {
        fprintf(stderr, "usage: pesq_ref +8000|+16000 [+wb] ref.wav deg.wav\n");
        return 2;
    }
    if (sample_rate == 8000 && err_info.mode == WB_MODE) {
        fprintf(stderr, "wideband requires 16000 Hz\n");
        return 2;
    }

    select_rate(sample_rate, &Error_Flag, &Error_Type);
    ref_info.data = read_wav16(paths[0], &ref_n);
    ref_info.Nsamples = ref_n;
    deg_info.data = read_wav16(paths[1], &deg_n);
    deg_info.Nsamples = deg_n;

    pesq_measure(&ref_info, &deg_info, &err_info, &Error_Flag, &Error_Type);
    if (Error_Flag != 0) {
        printf("error %ld %s\n", Error_Flag, Error_Type);
        return 1;
    }
    if (err_info.mode == NB_MODE)
        printf("raw %.9f\n", (double) err_info.pesq_mos);
    printf("mos_lqo %.9f\n", (double) err_info.mapped_mos);
    printf("crude_delay %ld\n", err_info.Crude_DelayEst);
    for (u = 0; u < err_info.Nutterances; u++)
        printf("utterance %ld %ld %ld %.9f\n", err_info.Utt_Start[u], err_info.Utt_End[u],
               err_info.Utt_Delay[u], (double) err_info.Utt_DelayConf[u]);
    return 0;
}
