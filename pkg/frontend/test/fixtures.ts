/** Fixture CSVs mirroring the integrator's file schema byte for byte:
 * `#`-prefixed metadata, one header line, numeric rows.
 */
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function fixtureDir(): string {
  return mkdtempSync(join(tmpdir(), "savflow-plots-"));
}

export function writeOrbitCsv(dir: string, name = "orbit_sav-rk4.csv"): string {
  const path = join(dir, name);
  writeFileSync(
    path,
    [
      "# problem=kepler",
      "# scheme=sav-rk4",
      "# dt_exp=10",
      "# periods=2",
      "# build_id=deadbeef",
      "step,t,x,y,period_mark",
      "0,0.0,0.2,0.0,1",
      "512,3.1415,-1.8,0.0,0",
      "1024,6.2832,0.2,0.0001,1",
      "1536,9.4248,-1.8,0.0002,0",
      "2048,12.566,0.2,0.0003,1",
    ].join("\n") + "\n",
  );
  return path;
}

export function writeEnergyCsv(dir: string, name = "run_kepler_sav-rk4.csv"): string {
  const path = join(dir, name);
  writeFileSync(
    path,
    [
      "# problem=kepler",
      "# scheme=sav-rk4",
      "# build_id=deadbeef",
      "step,t,E_mod,E_orig,relerr_E_mod,relerr_E_orig",
      "0,0.0,-0.5,-0.5,0.0,0.0",
      "1,0.1,-0.5,-0.49999,2.0e-14,2.0e-5",
      "2,0.2,-0.5,-0.50001,4.0e-14,1.0e-5",
      "3,0.3,-0.5,-0.49998,3.0e-14,4.0e-5",
    ].join("\n") + "\n",
  );
  return path;
}

export function writeConvergenceCsv(dir: string, name = "converge_kepler_sav-cn-euler.csv"): string {
  const path = join(dir, name);
  writeFileSync(
    path,
    [
      "# problem=kepler",
      "# scheme=sav-cn-euler",
      "# exp_lo=7",
      "# exp_hi=10",
      "# build_id=deadbeef",
      "# fitted_order_solution=2.085",
      "# fitted_order_energy=2.007",
      "# fitted_window_solution=9:10",
      "# fitted_window_energy=7:10",
      "exp,dt,n_steps,solution_error,energy_error,local_order_solution,local_order_energy",
      "7,0.049087,128,2.351e-1,1.1e-4,nan,nan",
      "8,0.024544,256,2.0833e-2,2.8e-5,3.50,1.97",
      "9,0.012272,512,2.7362e-3,7.1e-6,2.93,1.98",
      "10,0.006136,1024,5.3239e-4,1.8e-6,2.36,1.98",
    ].join("\n") + "\n",
  );
  return path;
}
