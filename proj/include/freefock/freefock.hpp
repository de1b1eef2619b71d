#pragma once

#include "freefock/words.hpp"
#include "freefock/toy_fock.hpp"
#include "freefock/grid.hpp"
#include "freefock/approximation.hpp"
#include "freefock/free_limits.hpp"
#include "freefock/nc_oracle.hpp"
#include "freefock/table.hpp"
#include "freefock/cli.hpp"
