#include <stdio.h>
#include "sumpoly.h"

int main(void) {
    SumpolyDescent *sys = NULL;
    if (sumpoly_descent_new(3, 13, 5, 1, SUMPOLY_BASIS_KIND_RANDOM, 0, &sys) != SUMPOLY_STATUS_OK) {
        fprintf(stderr, "descent: %s\n", sumpoly_last_error());
        return 1;
    }
    SumpolyFirstFall ff;
    if (sumpoly_first_fall(sys, 0, &ff) != SUMPOLY_STATUS_OK) {
        fprintf(stderr, "first fall: %s\n", sumpoly_last_error());
        sumpoly_descent_free(sys);
        return 1;
    }
    printf("d=%u dim_drop=%d D_ff=%u\n", ff.d, ff.dim_drop, ff.d_ff);
    sumpoly_descent_free(sys);

    SumpolySemaev *s = NULL;
    if (sumpoly_semaev_new(2, 13, 0, 1u << 13, &s) != SUMPOLY_STATUS_OK) {
        printf("expected failure: %s\n", sumpoly_last_error());
    }
    return 0;
}
