/* Generates a graph, recovers the partition and compares it with the truth. */
#include <stdio.h>
#include "dpsbm.h"

static int fail(const char *what) {
    const char *msg = dpsbm_last_error_message();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    const char *params = "{\"variant\": \"basbm\", \"n\": 120, \"a\": 15, \"b\": 1, \"rho\": 0.5}";
    DpsbmGraph *g = NULL;
    DpsbmPartition *truth = NULL, *found = NULL;
    bool same = false, valid = false;

    if (dpsbm_generate(params, 3, &g, &truth) != DPSBM_STATUS_OK) return fail("generate");
    if (dpsbm_recover(g, params, &found) != DPSBM_STATUS_OK) return fail("recover");
    if (dpsbm_partition_equal(found, truth, &same) != DPSBM_STATUS_OK) return fail("equal");
    if (dpsbm_certify(g, truth, params, 0.0 / 0.0, &valid) != DPSBM_STATUS_OK) return fail("certify");
    if (dpsbm_graph_get(g, 0, 500, NULL) != DPSBM_STATUS_INVALID_ARGUMENT) return fail("range check");

    printf("dpsbm %s: n %zu recovered %d certified %d\n", dpsbm_version(), dpsbm_graph_n(g), same, valid);
    dpsbm_partition_free(found);
    dpsbm_partition_free(truth);
    dpsbm_graph_free(g);
    return 0;
}
