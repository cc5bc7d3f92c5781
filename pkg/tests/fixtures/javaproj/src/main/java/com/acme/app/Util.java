package com.acme.app;

public class Util {

    /**
     * Bounds a value into the demo range.
     * @param v the value to bound
     * @return the clamped value
     */
    static int clamp(int v) {
        if (v > 100) {
            return 100;
        }
        return v < 0 ? 0 : v;
    }
}
