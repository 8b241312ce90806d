#include "cpnet/model.hpp"

namespace cpnet::fixtures {

CPNet flight_example()
{
    // A, B, C, D; edges A->C, B->C, C->D.
    CPNet::Adjacency adj = {
        {0, 0, 1, 0},
        {0, 0, 1, 0},
        {0, 0, 0, 1},
        {0, 0, 0, 0},
    };
    std::vector<std::vector<Positions>> cpts = {
        {{1, 2}},
        {{1, 2}},
        // rows: (a,b) (a,b̄) (ā,b) (ā,b̄)
        {{1, 2, 3}, {3, 1, 2}, {2, 3, 1}, {3, 2, 1}},
        // rows: c, c̄, c̄̄
        {{1, 2}, {2, 1}, {2, 1}},
    };
    return CPNet({2, 2, 3, 2}, std::move(adj), std::move(cpts));
}

} // namespace cpnet::fixtures
