/**
 * Preview-side mirror of the wave formulas.
 *
 * The design panel's wavelength label and spatial-wave preview are the
 * only numbers the UI computes itself; the shared wavelength vectors pin
 * this mirror against the service implementation bit for bit.
 */

export const DEFAULT_PITCH_M = 0.011;

/** lambda = pitch / (f * dt); zero delay is the all-in-phase limit. */
export function wavelengthFromDelay(pitchM: number, frequencyHz: number,
                                    onsetDelayS: number): number {
    if (!(pitchM > 0) || !(frequencyHz > 0) || onsetDelayS < 0) {
        throw new Error("invalid wavelength inputs");
    }
    if (onsetDelayS === 0) {
        return Infinity;
    }
    return pitchM / (frequencyHz * onsetDelayS);
}

/** Radial displacement of the travelling wave at position x, time t. */
export function spatialWave(amplitude: number, wavelengthM: number,
                            frequencyHz: number, x: number, t: number,
                            onsetDelayS = 0): number {
    const k = Number.isFinite(wavelengthM) ? 2 * Math.PI / wavelengthM : 0;
    return amplitude *
        Math.cos(k * x - 2 * Math.PI * frequencyHz * (t - onsetDelayS));
}
