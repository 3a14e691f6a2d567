/** Small hand-built CSV fixtures shared by the figure tests. */

export const SWEEP_CSV = [
  "n_bits,c_gflo,scheme,mean_delay_s,argmin_scheme",
  "100000000.0,1.0,ground,0.5,onehop",
  "100000000.0,1.0,onehop,0.25,onehop",
  "100000000.0,1.0,adaptive,0.25,onehop",
  "100000000.0,2000.0,ground,4.0,adaptive",
  "100000000.0,2000.0,onehop,2.0,adaptive",
  "100000000.0,2000.0,adaptive,1.0,adaptive",
  "16000000000.0,1.0,ground,3.0,ground",
  "16000000000.0,1.0,onehop,3.0,ground",
  "16000000000.0,1.0,adaptive,3.0,ground",
  "16000000000.0,2000.0,ground,8.0,onehop",
  "16000000000.0,2000.0,onehop,5.0,onehop",
  "16000000000.0,2000.0,adaptive,,onehop",
].join("\n");

/**
 * Component values are dyadic so sums are exact in binary floating point;
 * the overall column restates the component sum, as the simulator does.
 */
export function taskCsv(scheme: string): string {
  return [
    "task_id,scheme,status,isl_tx_s,sgl_tx_s,compute_s,overall_delay_s",
    `0,${scheme},ok,0.5,0.25,0.125,0.875`,
    `1,${scheme},ok,1.5,0.75,0.375,2.625`,
    `2,${scheme},dropped,,,,`,
  ].join("\n");
}

export const TABLE_CSV = [
  "capability_gflops,impr_vs_ground_pct,impr_vs_onehop_pct",
  "127.0,5.0,80.0",
  "200.0,12.0,60.0",
  "590.0,40.0,30.0",
  "1000.0,70.0,10.0",
].join("\n");
