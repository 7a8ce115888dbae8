#pragma once

#include <vector>

namespace era {

/// Dense two-phase simplex for: maximize c'x subject to Ax <= b, x >= 0.
/// Pivoting uses largest-coefficient selection with index tie-breaking,
/// which terminates on the bounded desk-scale instances this project
/// solves.
class SimplexSolver {
public:
    using Row = std::vector<double>;
    using Matrix = std::vector<Row>;

    enum class Status { optimal, infeasible, unbounded };

    struct Result {
        Status status = Status::infeasible;
        double objective = 0.0;
        std::vector<double> x;
    };

    static Result solve(const Matrix& a, const Row& b, const Row& c);
};

}  // namespace era
