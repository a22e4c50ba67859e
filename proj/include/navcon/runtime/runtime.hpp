#pragma once

#include "navcon/runtime/interpreter.hpp"
#include "navcon/runtime/patch.hpp"
#include "navcon/runtime/result.hpp"
#include "navcon/runtime/value.hpp"
