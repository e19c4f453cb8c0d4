#pragma once

#include "ucat/backend.hpp"
