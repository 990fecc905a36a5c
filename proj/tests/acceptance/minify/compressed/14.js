function e(e,n){const r=new Set,t=new Set,o=[];return e.forEach(function e(c){if(!r.has(c)){if(t.has(c))throw new Error("cycle at "+c);t.add(c);for(const r of n(c))e(r);t.delete(c),r.add(c),o.push(c)}}),o.reverse()}
