#pragma once

// Umbrella header for the PAL interpreter library.

#include "pal/engine/semantics.hpp"
#include "pal/engine/state.hpp"
#include "pal/engine/well_founded.hpp"
#include "pal/error.hpp"
#include "pal/grounding/ground_program.hpp"
#include "pal/grounding/signature.hpp"
#include "pal/interpreter.hpp"
#include "pal/narrative.hpp"
#include "pal/planner.hpp"
#include "pal/render.hpp"
#include "pal/syntax/parser.hpp"
#include "pal/syntax/printer.hpp"
#include "pal/value.hpp"
