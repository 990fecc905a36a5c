function r(r,e){var l=["B","KB","MB","GB","TB"],a=!1,n=0,o=r;while(o>=1024&&n<l.length-1){o/=1024;n++}var t=e==null?1:e;if(a===!0)console.log(o,l[n]);return o.toFixed(n===0?0:t)+" "+l[n]}
