// erabi.hpp - umbrella header

#pragma once

#include "erabi/params.hpp"
#include "erabi/basis.hpp"
#include "erabi/operators.hpp"
#include "erabi/hamiltonian.hpp"
#include "erabi/eigensolver.hpp"
#include "erabi/semiclassics.hpp"
#include "erabi/spectrum.hpp"
#include "erabi/quench.hpp"
#include "erabi/wigner.hpp"
#include "erabi/io.hpp"
