package org.alpha;

import java.util.List;
import java.util.Map;

/**
 * Outer container used by the scanner fixture.
 */
@SuppressWarnings("unchecked")
public class Outer {
    private static final String BRACES = "{ not a block }";
    private final Map<String, List<Integer>> table = new java.util.HashMap<>();

    /**
     * Computes the total weight of all entries. Later sentences are ignored.
     *
     * @param scale multiplier applied to every weight
     * @return the scaled sum
     */
    @Override
    public int totalWeight(int scale) {
        int sum = 0;
        for (List<Integer> xs : table.values()) { for (int x : xs) { sum += x * scale; } }
        return sum;
    }

    // plain comment, not a doc comment
    public void undocumented() {
        char c = '}';
    }

    /** Inner helper that tracks visits. */
    static class Inner {
        /**
         * Records a visit to the given {@code node} with a <b>timestamp</b>.
         */
        void visit(Map<String, Integer> node, long when) {
            String s = "}}}";
        }
    }

    /**
     * Returns the entry list for a key
     * spanning two lines.
     */
    public List<Integer> entries(String key) { return table.get(key); }
}
