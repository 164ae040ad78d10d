#ifndef VVMF_H
#define VVMF_H

/* This file is generated by cbindgen from the vvmf-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum VvmfStatus {
  VVMF_STATUS_OK = 0,
  VVMF_STATUS_NULL_ARGUMENT = 1,
  VVMF_STATUS_INVALID_UTF8 = 2,
  VVMF_STATUS_INVALID_DESCRIPTOR = 3,
  VVMF_STATUS_COMPUTE_FAILED = 4,
  VVMF_STATUS_UNDETERMINED = 5,
  VVMF_STATUS_BUFFER_TOO_SMALL = 6,
} VvmfStatus;

// Opaque analysis handle.
typedef struct VvmfAnalysis VvmfAnalysis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// # Safety
// `descriptor_json` must be a valid NUL-terminated string and `out` a valid
// pointer; on `VVMF_STATUS_OK` the caller owns the handle and must release
// it with [`vvmf_analysis_free`].
enum VvmfStatus vvmf_analysis_new(const char *descriptor_json, struct VvmfAnalysis **out);

// Variant of [`vvmf_analysis_new`] with explicit enumeration caps for the
// T-order search and the image closure.
//
// # Safety
// Same contract as [`vvmf_analysis_new`].
enum VvmfStatus vvmf_analysis_new_with_caps(const char *descriptor_json,
                                            uintptr_t order_cap,
                                            uintptr_t closure_cap,
                                            struct VvmfAnalysis **out);

// # Safety
// `handle` must come from [`vvmf_analysis_new`] and not have been freed.
void vvmf_analysis_free(struct VvmfAnalysis *handle);

// The full report as a JSON string; free it with [`vvmf_string_free`].
//
// # Safety
// `handle` must be a live analysis handle and `out` a valid pointer.
enum VvmfStatus vvmf_analysis_report_json(const struct VvmfAnalysis *handle, char **out);

// Virtual dimension of the analyzed representation.
//
// # Safety
// `handle` must be a live analysis handle and `out` a valid pointer.
enum VvmfStatus vvmf_analysis_dim(const struct VvmfAnalysis *handle, uint64_t *out);

// Generator weights k_1 <= ... <= k_d written into `out_buf`; `out_len`
// receives d. Returns `VVMF_STATUS_UNDETERMINED` when the weight-one data
// cannot be resolved, and `VVMF_STATUS_BUFFER_TOO_SMALL` (with `out_len`
// set) when the buffer cannot hold all weights.
//
// # Safety
// `handle` must be a live analysis handle; `out_buf` must point to at least
// `buf_len` writable elements; `out_len` must be a valid pointer.
enum VvmfStatus vvmf_analysis_weights(const struct VvmfAnalysis *handle,
                                      int64_t *out_buf,
                                      uintptr_t buf_len,
                                      uintptr_t *out_len);

// Free a string allocated by this library.
//
// # Safety
// `s` must have been returned by a vvmf function and not yet freed.
void vvmf_string_free(char *s);

// The last error message on this thread, or NULL if none; free it with
// [`vvmf_string_free`].
char *vvmf_last_error_message(void);

// h^0(O(k)) on the weighted projective line P(n1, n2).
//
// # Safety
// `out` must be a valid pointer.
enum VvmfStatus vvmf_wpline_h0(uint32_t n1, uint32_t n2, int64_t k, uint64_t *out);

// h^1(O(k)) on P(n1, n2).
//
// # Safety
// `out` must be a valid pointer.
enum VvmfStatus vvmf_wpline_h1(uint32_t n1, uint32_t n2, int64_t k, uint64_t *out);

// chi(O(k)) = h^0 - h^1 on P(n1, n2).
//
// # Safety
// `out` must be a valid pointer.
enum VvmfStatus vvmf_wpline_euler(uint32_t n1, uint32_t n2, int64_t k, int64_t *out);

// Run the q-expansion identity suite to the given order; `VVMF_STATUS_OK`
// means every identity verified.
enum VvmfStatus vvmf_qcheck(uintptr_t order);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VVMF_H */
