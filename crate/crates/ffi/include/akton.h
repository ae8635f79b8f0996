#ifndef AKTON_H
#define AKTON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AktonLayoutFormat {
  AktonLayoutFormat_Ascii = 0,
  AktonLayoutFormat_Svg = 1,
  AktonLayoutFormat_Json = 2,
} AktonLayoutFormat;

typedef enum AktonStatus {
  AktonStatus_Ok = 0,
  AktonStatus_NullArgument = 1,
  AktonStatus_InvalidUtf8 = 2,
  AktonStatus_ParseError = 3,
  AktonStatus_IllFormed = 4,
  AktonStatus_SimulationError = 5,
  AktonStatus_LayoutError = 6,
  AktonStatus_BadInputs = 7,
  AktonStatus_Panic = 99,
} AktonStatus;

/*
 Parsed program. Opaque to C.
 */
typedef struct AktonProgram AktonProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *akton_last_error(void);

/*
 # Safety
 `s` must come from this library and not be freed yet.
 */
void akton_string_free(char *s);

/*
 Parses a program (definitions plus a final term).

 # Safety
 `src` must be a NUL-terminated string; `out` must be writable.
 */
enum AktonStatus akton_program_parse(const char *src, struct AktonProgram **out);

/*
 # Safety
 `p` must come from [`akton_program_parse`] and not be freed yet.
 */
void akton_program_free(struct AktonProgram *p);

/*
 Canonical text of the program term.

 # Safety
 `p` must be a live program; `out` must be writable.
 */
enum AktonStatus akton_program_print(const struct AktonProgram *p, char **out);

/*
 Sort report as JSON. Returns `IllFormed` (with the report still written)
 when the term has violations.

 # Safety
 `p` must be a live program; `out` must be writable.
 */
enum AktonStatus akton_check_json(const struct AktonProgram *p, char **out);

/*
 Network JSON, healed or keeping cut edges.

 # Safety
 `p` must be a live program; `out` must be writable.
 */
enum AktonStatus akton_graph_json(const struct AktonProgram *p, bool heal, char **out);

/*
 Simulates with inputs such as `"A=01,B=1"` and writes the final Exit
 values as a string of `0`, `1` and `#` in Exit order.

 # Safety
 `p` must be a live program; `inputs` NUL-terminated; `out` writable.
 */
enum AktonStatus akton_simulate(const struct AktonProgram *p,
                                const char *inputs,
                                uintptr_t max_steps,
                                bool settle,
                                char **out);

/*
 Grid layout of a metric term.

 # Safety
 `p` must be a live program; `out` must be writable.
 */
enum AktonStatus akton_layout(const struct AktonProgram *p,
                              enum AktonLayoutFormat format,
                              char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* AKTON_H */
