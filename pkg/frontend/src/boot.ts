// Browser entry point; tests import mountApp directly instead.

import { ApiClient } from "./api.js";
import { mountApp } from "./main.js";

mountApp(document, new ApiClient(""));
