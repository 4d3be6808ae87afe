#pragma once

#include "cursorqc/cursor_kernel.hpp"
#include "cursorqc/machine.hpp"
#include "cursorqc/measurement.hpp"
#include "cursorqc/qubit_grover.hpp"
#include "cursorqc/random.hpp"
#include "cursorqc/types.hpp"
