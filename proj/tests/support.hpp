#pragma once

#include "rmtinit/painleve.hpp"

// One default-grid table per test binary; solving takes a few milliseconds
// but many cases need it.
inline const rmtinit::PainleveSolution& default_table() {
    static const rmtinit::PainleveSolution sol = rmtinit::solve_painleve_ii(rmtinit::PainleveGridSpec{});
    return sol;
}
