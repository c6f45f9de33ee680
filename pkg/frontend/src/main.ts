/** Browser entry point: mount the app on `#app` against the same-origin API. */

import { HttpApi } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
void new App(new HttpApi(""), root).init();
