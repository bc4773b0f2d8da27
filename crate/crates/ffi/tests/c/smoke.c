#include <math.h>
#include <stdio.h>
#include <string.h>

#include "kovtop.h"

int main(void) {
    KovtopModel *m = NULL;
    if (kovtop_model_new(1.0, 1.0, &m) != KOVTOP_STATUS_OK) return 10;

    char buf[256];
    size_t needed = 0;
    if (kovtop_classify(m, 10.0, 0.1, buf, sizeof buf, &needed) != KOVTOP_STATUS_OK) return 11;
    printf("region %s\n", buf);

    KovtopDiagram *d = NULL;
    if (kovtop_diagram_new(m, 10.0, 0.1, &d) != KOVTOP_STATUS_OK) return 12;
    size_t n = 0;
    kovtop_diagram_point_count(d, &n);
    for (size_t i = 0; i < n; i++) {
        KovtopPoint p;
        if (kovtop_diagram_point(d, i, &p) != KOVTOP_STATUS_OK) return 13;
        printf("%s %.17g %.17g\n", p.family, p.h, p.k);
    }
    KovtopPoint p;
    if (kovtop_diagram_point(d, n, &p) != KOVTOP_STATUS_OUT_OF_RANGE) return 14;
    kovtop_diagram_free(d);

    if (kovtop_classify(m, 1.0, 5.0, buf, sizeof buf, &needed) != KOVTOP_STATUS_INVALID_ORBIT) return 15;
    kovtop_last_error(buf, sizeof buf, &needed);
    printf("error %s\n", buf);

    kovtop_model_free(m);
    return 0;
}
