#ifndef NILCONTACT_H
#define NILCONTACT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum NcStatus {
  NC_STATUS_OK = 0,
  NC_STATUS_NULL_POINTER = 1,
  NC_STATUS_INVALID_UTF8 = 2,
  NC_STATUS_PARSE = 3,
  NC_STATUS_UNKNOWN_KEY = 4,
  NC_STATUS_IO = 5,
  NC_STATUS_INVALID_ARGUMENT = 6,
  NC_STATUS_PANIC = 7,
} NcStatus;

typedef enum NcSuite {
  NC_SUITE_ALL = 0,
  NC_SUITE_JACOBI = 1,
  NC_SUITE_CONTACT = 2,
  NC_SUITE_KAHLER = 3,
  NC_SUITE_CURVATURE = 4,
  NC_SUITE_RICCI = 5,
} NcSuite;

/* Opaque catalog entry. */
typedef struct NcEntry NcEntry;

/* Opaque result of a verification run. */
typedef struct NcReport NcReport;

/* Library version, static storage. */
const char *nc_version(void);

/* Message of the last failed call on this thread; empty if none. */
const char *nc_last_error(void);

NcStatus nc_entry_from_key(const char *key, NcEntry **out);

NcStatus nc_entry_parse(const char *source, const char *name, NcEntry **out);

void nc_entry_free(NcEntry *entry);

size_t nc_entry_dim(const NcEntry *entry);

NcStatus nc_check(const NcEntry *entry, NcSuite suite, uint64_t seed, NcReport **out);

/* theorem is "3.1" or "3.2" */
NcStatus nc_reproduce(const char *theorem, uint64_t seed, NcReport **out);

/* status: 0 pass, 1 fail, 2 skip, 3 info, anything else counts all checks */
size_t nc_report_count(const NcReport *report, int32_t status);

bool nc_report_ok(const NcReport *report);

/* Owned by the report handle. */
const char *nc_report_json(const NcReport *report);

void nc_report_free(NcReport *report);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* NILCONTACT_H */
