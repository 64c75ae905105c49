#pragma once

#define OSCSIM_VERSION "0.1.0"
