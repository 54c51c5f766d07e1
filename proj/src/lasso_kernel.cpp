#include "smr/lasso_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace smr::detail {

CoordinateDescentStatus lasso_coordinate_descent(const Matrix& q, const Vector& c, double penalty, Vector& x,
                                                 double tolerance, int max_sweeps) {
    const Index n = q.rows();
    Vector qx = q * x;  // maintained incrementally
    CoordinateDescentStatus status;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_update = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double qii = q(i, i);
            double xi = 0.0;
            if (qii > 0.0) {
                const double r = c(i) - (qx(i) - qii * x(i));
                xi = soft_threshold(r, penalty) / qii;
            }
            const double delta = xi - x(i);
            if (delta != 0.0) {
                qx.noalias() += delta * q.col(i);
                x(i) = xi;
                max_update = std::max(max_update, std::abs(delta));
            }
        }
        status.sweeps = sweep + 1;
        status.max_update = max_update;
        if (max_update < tolerance) {
            status.converged = true;
            break;
        }
    }
    return status;
}

}  // namespace smr::detail
