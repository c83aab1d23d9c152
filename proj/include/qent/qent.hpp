#pragma once

#include "classical_oscillator.hpp"
#include "csv.hpp"
#include "drive.hpp"
#include "error.hpp"
#include "figures.hpp"
#include "majorization.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "quantum_oscillator.hpp"
#include "random.hpp"
#include "schrodinger.hpp"
#include "verify.hpp"
