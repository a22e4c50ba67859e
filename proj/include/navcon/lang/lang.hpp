#pragma once

#include "navcon/lang/ast.hpp"
#include "navcon/lang/lexer.hpp"
#include "navcon/lang/parser.hpp"
#include "navcon/lang/printer.hpp"
#include "navcon/lang/validator.hpp"
