#include <stdio.h>
#include "torsion.h"

int main(void) {
    int64_t entries[4] = {2, 4, -6, 6};
    TorsionMatrix *m = NULL;
    if (torsion_matrix_new(2, 2, entries, &m) != TORSION_STATUS_OK) {
        fprintf(stderr, "%s\n", torsion_last_error());
        return 1;
    }
    char *factors = NULL;
    torsion_matrix_invariant_factors(m, &factors);
    printf("%s\n", factors);
    torsion_string_free(factors);
    torsion_matrix_free(m);

    char *order = NULL;
    TorsionStatus s = torsion_bound(2, 5, 1, &order);
    if (s == TORSION_STATUS_OK) {
        printf("%s\n", order);
        torsion_string_free(order);
    }
    return 0;
}
