import init, { benchCell, benchCsv, benchSvg } from "./pkg/mailseal_wasm.js";

const MIB = 1024 * 1024;
const form = document.getElementById("bench-form");
const status = document.getElementById("bench-status");

const pause = () => new Promise((resolve) => setTimeout(resolve, 0));

async function run(event) {
  event.preventDefault();
  const sizes = form.sizes.value.split(",").map((s) => Number(s.trim())).filter((n) => n > 0);
  const reps = Number(form.reps.value);
  const seed = BigInt(form.seed.value);
  const samples = [];
  for (const mib of sizes) {
    for (const op of ["encrypt", "decrypt"]) {
      status.textContent = `kernel_portable ${op} ${mib} MiB`;
      await pause();
      samples.push(...JSON.parse(benchCell(op, mib * MIB, reps, seed)));
    }
  }
  const json = JSON.stringify(samples);
  try {
    const csv = benchCsv(json, reps);
    document.getElementById("bench-csv").textContent = csv;
    document.getElementById("bench-chart").innerHTML = benchSvg(json, reps);
    const link = document.getElementById("bench-download");
    link.href = URL.createObjectURL(new Blob([csv], { type: "text/csv" }));
    link.hidden = false;
    status.textContent = "done";
  } catch (err) {
    status.textContent = String(err.message ?? err);
  }
}

await init();
form.addEventListener("submit", run);
